use std::collections::HashMap;

use super::{Iri, Term, Triple, RDFS_COMMENT, RDFS_LABEL};

/// Deterministic stand-in for a search deadline: every candidate triple a
/// lookup examines consumes one unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanBudget {
    max: usize,
    consumed: usize,
}

impl ScanBudget {
    pub fn new(max: usize) -> Self {
        ScanBudget { max, consumed: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(usize::MAX)
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn remaining(&self) -> usize {
        self.max - self.consumed
    }

    pub fn is_exhausted(&self) -> bool {
        self.consumed >= self.max
    }

    fn try_consume(&mut self) -> bool {
        if self.consumed >= self.max {
            false
        } else {
            self.consumed += 1;
            true
        }
    }
}

/// A stored triple together with its insertion position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreEntry<'a> {
    pub position: usize,
    pub triple: &'a Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult<'a> {
    pub entries: Vec<StoreEntry<'a>>,
    /// Candidates were left unexamined because the budget ran out.
    pub truncated: bool,
}

impl<'a> MatchResult<'a> {
    pub fn triples(&self) -> impl Iterator<Item = &'a Triple> + '_ {
        self.entries.iter().map(|e| e.triple)
    }
}

/// In-memory triple store with subject, predicate and object indexes.
///
/// All index lists hold insertion positions in ascending order, so every
/// lookup yields triples in insertion order.
#[derive(Debug, Default, Clone)]
pub struct TripleStore {
    triples: Vec<Triple>,
    positions: HashMap<Triple, usize>,
    spo: HashMap<Iri, Vec<usize>>,
    pos: HashMap<Iri, Vec<usize>>,
    osp: HashMap<Term, Vec<usize>>,
    labels: HashMap<String, Vec<Iri>>,
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut store = Self::new();
        for t in triples {
            store.insert(t);
        }
        store
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Inserts `t` unless already present. Returns whether the store grew.
    pub fn insert(&mut self, t: Triple) -> bool {
        if self.positions.contains_key(&t) {
            return false;
        }
        let at = self.triples.len();
        self.spo.entry(t.subject.clone()).or_default().push(at);
        self.pos.entry(t.predicate.clone()).or_default().push(at);
        self.osp.entry(t.object.clone()).or_default().push(at);

        self.index_name(normalize_name(t.subject.local_name()), &t.subject);
        match &t.object {
            Term::Iri(o) => self.index_name(normalize_name(o.local_name()), o),
            Term::Literal(lit) if t.predicate.as_str() == RDFS_LABEL => {
                let key = normalize_name(&lit.value);
                let subject = t.subject.clone();
                self.index_name(key, &subject);
            }
            Term::Literal(_) => {}
        }

        self.positions.insert(t.clone(), at);
        self.triples.push(t);
        true
    }

    fn index_name(&mut self, key: String, iri: &Iri) {
        if key.is_empty() {
            return;
        }
        let iris = self.labels.entry(key).or_default();
        if !iris.contains(iri) {
            iris.push(iri.clone());
        }
    }

    /// Pattern lookup over the most selective bound index.
    ///
    /// Each candidate pulled from the index costs one budget unit, whether
    /// or not it matches; the scan stops as soon as the budget is spent.
    pub fn match_pattern(
        &self,
        s: Option<&Iri>,
        p: Option<&Iri>,
        o: Option<&Term>,
        budget: &mut ScanBudget,
    ) -> MatchResult<'_> {
        const EMPTY: &[usize] = &[];
        let mut lists: Vec<&[usize]> = Vec::with_capacity(3);
        if let Some(s) = s {
            lists.push(self.spo.get(s).map_or(EMPTY, Vec::as_slice));
        }
        if let Some(p) = p {
            lists.push(self.pos.get(p).map_or(EMPTY, Vec::as_slice));
        }
        if let Some(o) = o {
            lists.push(self.osp.get(o).map_or(EMPTY, Vec::as_slice));
        }
        let candidates = lists.into_iter().min_by_key(|l| l.len());

        let mut entries = Vec::new();
        let mut truncated = false;
        let mut examine = |at: usize| -> bool {
            if !budget.try_consume() {
                truncated = true;
                return false;
            }
            let t = &self.triples[at];
            if s.is_none_or(|s| &t.subject == s)
                && p.is_none_or(|p| &t.predicate == p)
                && o.is_none_or(|o| &t.object == o)
            {
                entries.push(StoreEntry {
                    position: at,
                    triple: t,
                });
            }
            true
        };
        match candidates {
            Some(list) => {
                for &at in list {
                    if !examine(at) {
                        break;
                    }
                }
            }
            None => {
                for at in 0..self.triples.len() {
                    if !examine(at) {
                        break;
                    }
                }
            }
        }
        MatchResult { entries, truncated }
    }

    /// Unbudgeted lookup for internal use (neighborhoods, comments).
    pub fn lookup(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<StoreEntry<'_>> {
        self.match_pattern(s, p, o, &mut ScanBudget::unlimited()).entries
    }

    /// First `rdfs:comment` of `resource`, falling back to its first `rdfs:label`.
    pub fn comment_of(&self, resource: &Iri) -> Option<&str> {
        self.first_literal(resource, RDFS_COMMENT)
            .or_else(|| self.first_literal(resource, RDFS_LABEL))
    }

    fn first_literal(&self, resource: &Iri, predicate: &str) -> Option<&str> {
        self.spo.get(resource)?.iter().find_map(|&at| {
            let t = &self.triples[at];
            if t.predicate.as_str() == predicate {
                t.object.as_literal().map(|l| l.value.as_str())
            } else {
                None
            }
        })
    }

    /// IRIs whose label or local name equals `name` after normalization,
    /// in the order they were first indexed.
    pub fn resolve_by_name(&self, name: &str) -> Vec<Iri> {
        let key = normalize_name(name);
        self.labels.get(&key).cloned().unwrap_or_default()
    }

    /// Resources sharing a triple with `resource` in subject or object
    /// position, distinct, ordered by first occurrence.
    pub fn neighbors(&self, resource: &Iri) -> Vec<&Iri> {
        let mut at: Vec<usize> = Vec::new();
        if let Some(list) = self.spo.get(resource) {
            at.extend(list);
        }
        if let Some(list) = self.osp.get(&Term::Iri(resource.clone())) {
            at.extend(list);
        }
        at.sort_unstable();
        at.dedup();
        let mut out: Vec<&Iri> = Vec::new();
        for i in at {
            let t = &self.triples[i];
            let other = if &t.subject == resource {
                t.object.as_iri()
            } else {
                Some(&t.subject)
            };
            if let Some(other) = other {
                if other != resource && !out.contains(&other) {
                    out.push(other);
                }
            }
        }
        out
    }
}

/// Case-folds and maps `_` and `-` to spaces, collapsing runs of whitespace.
pub(crate) fn normalize_name(name: &str) -> String {
    name.chars()
        .map(|c| if c == '_' || c == '-' { ' ' } else { c })
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
