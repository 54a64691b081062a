//! Term-frequency context profiles and the context-similarity gate.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ontology::{Ontology, OntologyError};
use crate::rdf::{Iri, TripleStore};

const DEFAULT_STOP_WORDS: &str = include_str!("../data/stopwords.txt");

/// Lowercased alphanumeric tokens; every other character separates tokens.
pub fn tokenize_raw(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl Default for StopWords {
    fn default() -> Self {
        Self::parse(DEFAULT_STOP_WORDS)
    }
}

impl StopWords {
    /// One token per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        StopWords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> std::io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn empty() -> Self {
        StopWords(HashSet::new())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    /// Raw tokenization with stop words removed.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        tokenize_raw(text)
            .into_iter()
            .filter(|t| !self.contains(t))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityMode {
    /// Plain sum of per-neighbor cosines; unbounded above.
    Sum,
    /// Sum divided by neighborhood size; always in `[0, 1]`.
    #[default]
    Mean,
}

impl std::str::FromStr for SimilarityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(SimilarityMode::Sum),
            "mean" => Ok(SimilarityMode::Mean),
            other => Err(format!("unknown similarity mode {other:?} (expected sum or mean)")),
        }
    }
}

/// Bag of words: token -> frequency. Absent tokens count zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextProfile {
    counts: BTreeMap<String, u64>,
}

impl ContextProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: impl IntoIterator<Item = S>) -> Self {
        let mut p = Self::new();
        for t in tokens {
            p.add(t.as_ref(), 1);
        }
        p
    }

    pub fn add(&mut self, token: &str, count: u64) {
        if count > 0 {
            *self.counts.entry(token.to_string()).or_insert(0) += count;
        }
    }

    pub fn get(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Cosine of the two count vectors; 0 when either is empty.
pub fn cosine(p: &ContextProfile, q: &ContextProfile) -> f64 {
    if p.is_empty() || q.is_empty() {
        return 0.0;
    }
    let (small, large) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    let dot: f64 = small
        .iter()
        .map(|(t, c)| c as f64 * large.get(t) as f64)
        .sum();
    let norm = |x: &ContextProfile| x.iter().map(|(_, c)| (c as f64).powi(2)).sum::<f64>().sqrt();
    (dot / (norm(p) * norm(q))).clamp(0.0, 1.0)
}

/// Tokens within `window` positions on either side of each mention of the
/// instance, excluding the instance's own mention tokens and stop words.
pub fn instance_context(
    ontology: &Ontology,
    instance: &str,
    window: usize,
    stop_words: &StopWords,
) -> Result<ContextProfile, OntologyError> {
    let inst = ontology.instance(instance)?;
    let tokens = ontology.tokens();
    let own: HashSet<usize> = inst.mentions.iter().flat_map(|m| m.start..m.end).collect();
    let mut profile = ContextProfile::new();
    if window == 0 {
        return Ok(profile);
    }
    for m in &inst.mentions {
        let before = m.start.saturating_sub(window)..m.start;
        let after = m.end..(m.end + window).min(tokens.len());
        for at in before.chain(after) {
            if own.contains(&at) || stop_words.contains(&tokens[at]) {
                continue;
            }
            profile.add(&tokens[at], 1);
        }
    }
    Ok(profile)
}

fn describe(store: &TripleStore, resource: &Iri, stop_words: &StopWords) -> ContextProfile {
    let text = store
        .comment_of(resource)
        .unwrap_or_else(|| resource.local_name());
    ContextProfile::from_tokens(stop_words.tokenize(text))
}

/// The resource's own comment profile (when it has one) followed by one
/// profile per one-hop neighbor resource.
pub fn neighborhood_profiles(
    store: &TripleStore,
    resource: &Iri,
    stop_words: &StopWords,
) -> Vec<ContextProfile> {
    let mut out = Vec::new();
    if let Some(own) = store.comment_of(resource) {
        out.push(ContextProfile::from_tokens(stop_words.tokenize(own)));
    }
    out.extend(
        store
            .neighbors(resource)
            .into_iter()
            .map(|n| describe(store, n, stop_words)),
    );
    out
}

pub fn aggregate(profiles: &[ContextProfile], wa: &ContextProfile, mode: SimilarityMode) -> f64 {
    let sum: f64 = profiles.iter().map(|p| cosine(p, wa)).sum();
    match mode {
        SimilarityMode::Sum => sum,
        SimilarityMode::Mean if profiles.is_empty() => 0.0,
        SimilarityMode::Mean => sum / profiles.len() as f64,
    }
}

pub fn context_similarity(
    store: &TripleStore,
    resource: &Iri,
    wa: &ContextProfile,
    mode: SimilarityMode,
    stop_words: &StopWords,
) -> f64 {
    aggregate(&neighborhood_profiles(store, resource, stop_words), wa, mode)
}
