//! Hand-written N-Triples conformance cases with their exact expected terms.

use ontoenrich_core::rdf::{Iri, Literal, ParseErrorKind, Term, Triple};

pub enum Expect {
    Triples(Vec<Triple>),
    /// Error kind and 1-based line number.
    Error(ParseErrorKind, usize),
}

pub struct NtCase {
    pub name: &'static str,
    pub input: &'static [u8],
    pub expect: Expect,
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn t(o: impl Into<Term>) -> Triple {
    Triple::new(iri("http://e/s"), iri("http://e/p"), o)
}

fn ok(name: &'static str, input: &'static [u8], triples: Vec<Triple>) -> NtCase {
    NtCase {
        name,
        input,
        expect: Expect::Triples(triples),
    }
}

fn err(name: &'static str, input: &'static [u8], kind: ParseErrorKind, line: usize) -> NtCase {
    NtCase {
        name,
        input,
        expect: Expect::Error(kind, line),
    }
}

pub fn cases() -> Vec<NtCase> {
    use ParseErrorKind::*;
    const XSD_INT: &str = "http://www.w3.org/2001/XMLSchema#integer";
    vec![
        ok("iri object", b"<http://e/s> <http://e/p> <http://e/o> .\n", vec![t(iri("http://e/o"))]),
        ok("plain literal", b"<http://e/s> <http://e/p> \"hello\" .", vec![t(Literal::plain("hello"))]),
        ok("empty literal", b"<http://e/s> <http://e/p> \"\" .", vec![t(Literal::plain(""))]),
        ok("language tag", b"<http://e/s> <http://e/p> \"Rhein\"@de .", vec![t(Literal::lang("Rhein", "de"))]),
        ok(
            "language subtag",
            b"<http://e/s> <http://e/p> \"colour\"@en-GB .",
            vec![t(Literal::lang("colour", "en-GB"))],
        ),
        ok(
            "datatype",
            b"<http://e/s> <http://e/p> \"367\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
            vec![t(Literal::typed("367", iri(XSD_INT)))],
        ),
        ok("tab escape", br#"<http://e/s> <http://e/p> "a\tb" ."#, vec![t(Literal::plain("a\tb"))]),
        ok("newline escape", br#"<http://e/s> <http://e/p> "a\nb" ."#, vec![t(Literal::plain("a\nb"))]),
        ok("carriage return escape", br#"<http://e/s> <http://e/p> "a\rb" ."#, vec![t(Literal::plain("a\rb"))]),
        ok("backspace escape", br#"<http://e/s> <http://e/p> "a\bb" ."#, vec![t(Literal::plain("a\u{8}b"))]),
        ok("form feed escape", br#"<http://e/s> <http://e/p> "a\fb" ."#, vec![t(Literal::plain("a\u{c}b"))]),
        ok("quote escapes", br#"<http://e/s> <http://e/p> "\"q\" \'s\'" ."#, vec![t(Literal::plain("\"q\" 's'"))]),
        ok("backslash escape", br#"<http://e/s> <http://e/p> "c:\\x" ."#, vec![t(Literal::plain("c:\\x"))]),
        ok("short unicode escape", br#"<http://e/s> <http://e/p> "caf\u00E9" ."#, vec![t(Literal::plain("caf\u{e9}"))]),
        ok("long unicode escape", br#"<http://e/s> <http://e/p> "\U0001F30A" ."#, vec![t(Literal::plain("\u{1F30A}"))]),
        ok("raw utf-8", "<http://e/s> <http://e/p> \"Zard K\u{16b}h\" .".as_bytes(), vec![t(Literal::plain("Zard K\u{16b}h"))]),
        ok("unicode escape in iri", br#"<http://e/s> <http://e/p> <http://e/caf\u00E9> ."#, vec![t(iri("http://e/caf\u{e9}"))]),
        ok("comment line", b"# nothing here\n<http://e/s> <http://e/p> \"x\" .", vec![t(Literal::plain("x"))]),
        ok("trailing comment", b"<http://e/s> <http://e/p> \"x\" . # note", vec![t(Literal::plain("x"))]),
        ok("blank lines", b"\n\n<http://e/s> <http://e/p> \"x\" .\n\n", vec![t(Literal::plain("x"))]),
        ok("crlf endings", b"<http://e/s> <http://e/p> \"x\" .\r\n<http://e/s> <http://e/p> \"y\" .\r\n", vec![t(Literal::plain("x")), t(Literal::plain("y"))]),
        ok("tabs between terms", b"<http://e/s>\t<http://e/p>\t\"x\"\t.", vec![t(Literal::plain("x"))]),
        ok("no space before dot", b"<http://e/s> <http://e/p> <http://e/o>.", vec![t(iri("http://e/o"))]),
        ok("hash inside literal", b"<http://e/s> <http://e/p> \"#1\" .", vec![t(Literal::plain("#1"))]),
        ok("duplicate lines are kept", b"<http://e/s> <http://e/p> \"x\" .\n<http://e/s> <http://e/p> \"x\" .", vec![t(Literal::plain("x")), t(Literal::plain("x"))]),
        ok("empty document", b"", vec![]),
        err("literal subject", b"\"s\" <http://e/p> <http://e/o> .", LiteralSubject, 1),
        err("literal predicate", b"<http://e/s> \"p\" <http://e/o> .", NonIriPredicate, 1),
        err("blank node subject", b"_:b <http://e/p> <http://e/o> .", BlankNode, 1),
        err("blank node object", b"<http://e/s> <http://e/p> _:b .", BlankNode, 1),
        err("missing dot", b"<http://e/s> <http://e/p> <http://e/o>", MissingDot, 1),
        err("trailing content", b"<http://e/s> <http://e/p> <http://e/o> . <http://e/x>", TrailingContent, 1),
        err("unterminated iri", b"<http://e/s> <http://e/p> <http://e/o", UnterminatedIri, 1),
        err("space in iri", b"<http://e/s> <http://e/p> <http://e/a b> .", InvalidIriChar(' '), 1),
        err("empty iri", b"<> <http://e/p> <http://e/o> .", EmptyIri, 1),
        err("unterminated literal", b"<http://e/s> <http://e/p> \"open .", UnterminatedLiteral, 1),
        err("bad escape", br#"<http://e/s> <http://e/p> "\q" ."#, InvalidEscape, 1),
        err("short unicode escape", br#"<http://e/s> <http://e/p> "\u00" ."#, InvalidEscape, 1),
        err("surrogate escape", br#"<http://e/s> <http://e/p> "\uD800" ."#, InvalidEscape, 1),
        err("empty language tag", b"<http://e/s> <http://e/p> \"x\"@ .", InvalidLanguageTag, 1),
        err("numeric primary language", b"<http://e/s> <http://e/p> \"x\"@12 .", InvalidLanguageTag, 1),
        err("single caret", b"<http://e/s> <http://e/p> \"x\"^<http://e/t> .", ExpectedTerm, 1),
        err("missing object", b"<http://e/s> <http://e/p> .", ExpectedTerm, 1),
        err("error on later line", b"<http://e/s> <http://e/p> \"x\" .\n<http://e/s> <http://e/p>", ExpectedTerm, 2),
        err("invalid utf-8", b"<http://e/s> <http://e/p> \"\xff\" .", InvalidUtf8, 1),
    ]
}
