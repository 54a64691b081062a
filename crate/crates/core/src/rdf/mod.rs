//! RDF terms, N-Triples I/O and the in-memory triple store.

mod ntriples;
mod store;

pub use ntriples::{parse_ntriples, parse_ntriples_lenient, serialize_ntriples, ParseError, ParseErrorKind};
pub use store::{MatchResult, ScanBudget, StoreEntry, TripleStore};

use std::fmt;

pub const RDFS_COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

/// An IRI. Never empty, never contains whitespace or angle brackets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidIri> {
        let value = value.into();
        if value.is_empty() {
            return Err(InvalidIri(value));
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c == '<' || c == '>')
        {
            return Err(InvalidIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The fragment after the last `#`, or else the last non-empty path segment.
    pub fn local_name(&self) -> &str {
        let s = self.0.trim_end_matches('/');
        let cut = s.rfind(['#', '/']).map(|i| i + 1).unwrap_or(0);
        let local = &s[cut..];
        if local.is_empty() {
            s
        } else {
            local
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid IRI {0:?}")]
pub struct InvalidIri(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub value: String,
    pub language: Option<String>,
    pub datatype: Option<Iri>,
}

impl Literal {
    pub fn plain(value: impl Into<String>) -> Self {
        Literal {
            value: value.into(),
            language: None,
            datatype: None,
        }
    }

    pub fn lang(value: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            value: value.into(),
            language: Some(language.into()),
            datatype: None,
        }
    }

    pub fn typed(value: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            value: value.into(),
            language: None,
            datatype: Some(datatype),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// A statement. Subject and predicate are IRIs by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_rejects_whitespace_and_brackets() {
        assert!(Iri::new("").is_err());
        assert!(Iri::new("http://x/a b").is_err());
        assert!(Iri::new("http://x/<a>").is_err());
        assert!(Iri::new("http://x/a").is_ok());
    }

    #[test]
    fn local_names() {
        let l = |s: &str| Iri::new(s).unwrap().local_name().to_string();
        assert_eq!(l("http://x/Black_Forest"), "Black_Forest");
        assert_eq!(l("http://www.w3.org/2000/01/rdf-schema#label"), "label");
        assert_eq!(l("http://x/dir/"), "dir");
        assert_eq!(l("urn:isbn"), "urn:isbn");
    }
}
