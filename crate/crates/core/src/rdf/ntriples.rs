//! Line-oriented N-Triples reader and writer.
//!
//! Only IRIs and literals are supported. Blank nodes are rejected in strict
//! mode and skipped (reported) in lenient mode.

use std::fmt::Write as _;

use super::{Iri, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("unterminated IRI")]
    UnterminatedIri,
    #[error("invalid character {0:?} in IRI")]
    InvalidIriChar(char),
    #[error("empty IRI")]
    EmptyIri,
    #[error("unterminated literal")]
    UnterminatedLiteral,
    #[error("invalid escape sequence")]
    InvalidEscape,
    #[error("invalid language tag")]
    InvalidLanguageTag,
    #[error("literal in subject position")]
    LiteralSubject,
    #[error("predicate must be an IRI")]
    NonIriPredicate,
    #[error("blank nodes are not supported")]
    BlankNode,
    #[error("expected a term")]
    ExpectedTerm,
    #[error("missing terminating '.'")]
    MissingDot,
    #[error("unexpected content after '.'")]
    TrailingContent,
}

/// A malformed statement. `offset` is the byte offset from the start of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, byte {offset}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// Parses a whole document; the first malformed line fails the whole input.
pub fn parse_ntriples(input: &[u8]) -> Result<Vec<Triple>, ParseError> {
    let text = decode(input)?;
    let mut out = Vec::new();
    for (line_no, start, line) in lines(text) {
        if let Some(t) = parse_line(line, line_no, start)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Parses what it can, returning the good triples alongside every line error.
pub fn parse_ntriples_lenient(input: &[u8]) -> (Vec<Triple>, Vec<ParseError>) {
    let text = match decode(input) {
        Ok(t) => t,
        Err(e) => return (Vec::new(), vec![e]),
    };
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (line_no, start, line) in lines(text) {
        match parse_line(line, line_no, start) {
            Ok(Some(t)) => out.push(t),
            Ok(None) => {}
            Err(e) => errors.push(e),
        }
    }
    (out, errors)
}

pub fn serialize_ntriples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> String {
    let mut out = String::new();
    for t in triples {
        write_iri(&mut out, &t.subject);
        out.push(' ');
        write_iri(&mut out, &t.predicate);
        out.push(' ');
        match &t.object {
            Term::Iri(iri) => write_iri(&mut out, iri),
            Term::Literal(lit) => write_literal(&mut out, lit),
        }
        out.push_str(" .\n");
    }
    out
}

fn write_iri(out: &mut String, iri: &Iri) {
    out.push('<');
    for c in iri.as_str().chars() {
        match c {
            '\\' | '"' | '{' | '}' | '|' | '^' | '`' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('>');
}

fn write_literal(out: &mut String, lit: &Literal) {
    out.push('"');
    for c in lit.value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c as u32 == 0x7F => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    if let Some(lang) = &lit.language {
        out.push('@');
        out.push_str(lang);
    } else if let Some(dt) = &lit.datatype {
        out.push_str("^^");
        write_iri(out, dt);
    }
}

fn decode(input: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(input).map_err(|e| {
        let offset = e.valid_up_to();
        let line = input[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
        ParseError {
            line,
            offset,
            kind: ParseErrorKind::InvalidUtf8,
        }
    })
}

/// Yields (1-based line number, byte offset of line start, line without terminator).
fn lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    let mut start = 0;
    text.split('\n').enumerate().map(move |(i, raw)| {
        let line_start = start;
        start += raw.len() + 1;
        (i + 1, line_start, raw.strip_suffix('\r').unwrap_or(raw))
    })
}

fn parse_line(line: &str, line_no: usize, base: usize) -> Result<Option<Triple>, ParseError> {
    let mut cur = Cursor {
        src: line,
        pos: 0,
        line: line_no,
        base,
    };
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }

    let subject = match cur.peek() {
        Some('<') => cur.iri()?,
        Some('"') => return Err(cur.error(ParseErrorKind::LiteralSubject)),
        Some('_') if cur.rest().starts_with("_:") => {
            return Err(cur.error(ParseErrorKind::BlankNode))
        }
        _ => return Err(cur.error(ParseErrorKind::ExpectedTerm)),
    };
    cur.skip_ws();
    let predicate = match cur.peek() {
        Some('<') => cur.iri()?,
        None => return Err(cur.error(ParseErrorKind::ExpectedTerm)),
        _ => return Err(cur.error(ParseErrorKind::NonIriPredicate)),
    };
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('"') => Term::Literal(cur.literal()?),
        Some('_') if cur.rest().starts_with("_:") => {
            return Err(cur.error(ParseErrorKind::BlankNode))
        }
        _ => return Err(cur.error(ParseErrorKind::ExpectedTerm)),
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.error(ParseErrorKind::MissingDot));
    }
    cur.bump();
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(cur.error(ParseErrorKind::TrailingContent));
    }
    Ok(Some(Triple {
        subject,
        predicate,
        object,
    }))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    base: usize,
}

impl Cursor<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            offset: self.base + pos,
            kind,
        }
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        let open = self.pos;
        self.bump(); // '<'
        let mut value = String::new();
        loop {
            let at = self.pos;
            match self.bump() {
                None => return Err(self.error_at(open, ParseErrorKind::UnterminatedIri)),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => value.push(self.hex_char(4, at)?),
                    Some('U') => value.push(self.hex_char(8, at)?),
                    _ => return Err(self.error_at(at, ParseErrorKind::InvalidEscape)),
                },
                Some(c) if c.is_whitespace() || c == '<' => {
                    return Err(self.error_at(at, ParseErrorKind::InvalidIriChar(c)))
                }
                Some(c) => value.push(c),
            }
        }
        if value.is_empty() {
            return Err(self.error_at(open, ParseErrorKind::EmptyIri));
        }
        Iri::new(value).map_err(|e| {
            let c = e.0.chars().find(|c| c.is_whitespace() || *c == '<' || *c == '>');
            self.error_at(open, ParseErrorKind::InvalidIriChar(c.unwrap_or('?')))
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let open = self.pos;
        self.bump(); // '"'
        let mut value = String::new();
        loop {
            let at = self.pos;
            match self.bump() {
                None => return Err(self.error_at(open, ParseErrorKind::UnterminatedLiteral)),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_char(4, at)?,
                        Some('U') => self.hex_char(8, at)?,
                        _ => return Err(self.error_at(at, ParseErrorKind::InvalidEscape)),
                    };
                    value.push(c);
                }
                Some(c) => value.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                let at = self.pos;
                self.bump();
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.bump();
                }
                let tag = &self.src[start..self.pos];
                if !valid_language_tag(tag) {
                    return Err(self.error_at(at, ParseErrorKind::InvalidLanguageTag));
                }
                Ok(Literal::lang(value, tag))
            }
            Some('^') => {
                if !self.rest().starts_with("^^<") {
                    return Err(self.error(ParseErrorKind::ExpectedTerm));
                }
                self.pos += 2;
                let dt = self.iri()?;
                Ok(Literal::typed(value, dt))
            }
            _ => Ok(Literal::plain(value)),
        }
    }

    fn hex_char(&mut self, digits: usize, escape_at: usize) -> Result<char, ParseError> {
        let end = self.pos + digits;
        let hex = self
            .src
            .get(self.pos..end)
            .filter(|h| h.chars().all(|c| c.is_ascii_hexdigit()))
            .ok_or_else(|| self.error_at(escape_at, ParseErrorKind::InvalidEscape))?;
        let code = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error_at(escape_at, ParseErrorKind::InvalidEscape))?;
        self.pos = end;
        Ok(code)
    }
}

fn valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn plain_statement() {
        let t = parse_ntriples(b"<http://x/a> <http://x/p> <http://x/b> .").unwrap();
        assert_eq!(
            t,
            vec![Triple::new(iri("http://x/a"), iri("http://x/p"), iri("http://x/b"))]
        );
    }

    #[test]
    fn language_tagged_literal() {
        let t = parse_ntriples(b"<http://x/a> <http://x/p> \"hi\"@en .").unwrap();
        assert_eq!(t[0].object, Term::Literal(Literal::lang("hi", "en")));
    }

    #[test]
    fn literal_subject_is_rejected() {
        let e = parse_ntriples(b"\"lit\" <http://x/p> <http://x/b> .").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::LiteralSubject);
        assert_eq!((e.line, e.offset), (1, 0));
    }

    #[test]
    fn offsets_are_absolute() {
        let input = b"# header\n<http://x/a> <http://x/p> <http://x/b>\n";
        let e = parse_ntriples(input).unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::MissingDot);
        assert_eq!(e.offset, input.len() - 1);
    }

    #[test]
    fn lenient_keeps_good_lines() {
        let input = b"<http://x/a> <http://x/p> _:b1 .\n<http://x/a> <http://x/p> \"ok\" .\n";
        let (good, errors) = parse_ntriples_lenient(input);
        assert_eq!(good.len(), 1);
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].kind, ParseErrorKind::BlankNode);
        assert!(parse_ntriples(input).is_err());
    }

    #[test]
    fn serializer_escapes() {
        let t = Triple::new(
            iri("http://x/a"),
            iri("http://x/p"),
            Literal::plain("say \"hi\"\n\\"),
        );
        let s = serialize_ntriples([&t]);
        assert_eq!(s, "<http://x/a> <http://x/p> \"say \\\"hi\\\"\\n\\\\\" .\n");
        assert_eq!(parse_ntriples(s.as_bytes()).unwrap(), vec![t]);
    }
}
