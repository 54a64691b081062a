//! Inductive generalization of lifted schemas over the taxonomy.
//!
//! When a predicate links one domain to several sibling ranges, the parent
//! of those siblings becomes a candidate range. The remaining siblings are
//! searched for in the store; once every sibling is backed by an instance
//! assertion, the sibling schemas collapse into a single parent schema.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::config::EnrichmentConfig;
use crate::context::StopWords;
use crate::enrichment::{record_hit, run_searches, EnrichError, InstancePair, Searcher};
use crate::ontology::{AssertionRef, AssertionSource, Ontology, OntologyError, RelationSchema};
use crate::rdf::{Iri, TripleStore};
use crate::report::DiscoveredAssertion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    Open,
    Confirmed,
    /// No evidence found in the store. Not a disproof.
    RefutedUnknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub predicate: String,
    pub dom: String,
    pub parent_range: String,
    pub covered_children: Vec<String>,
    pub missing_children: Vec<String>,
    pub status: HypothesisStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseRecord {
    pub into: RelationSchema,
    pub removed: Vec<RelationSchema>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneralizeError {
    #[error("hypothesis {predicate} ({dom} -> {parent_range}) is not confirmed")]
    NotConfirmed {
        predicate: String,
        dom: String,
        parent_range: String,
    },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

fn has_supported_schema(ontology: &Ontology, predicate: &str, dom: &str, range: &str) -> bool {
    ontology
        .relations()
        .iter()
        .any(|r| r.predicate == predicate && r.dom == dom && r.range == range && !r.support.is_empty())
}

/// One hypothesis per (predicate, dom, parent) whose children carry at
/// least `min_evidence` supported schemas.
pub fn hypothesize(ontology: &Ontology, min_evidence: usize) -> Vec<Hypothesis> {
    let mut groups: Vec<(&str, &str)> = Vec::new();
    for r in ontology.relations() {
        let g = (r.predicate.as_str(), r.dom.as_str());
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    let mut out = Vec::new();
    for (predicate, dom) in groups {
        for parent in ontology.concepts() {
            let children = ontology.children(&parent.id).expect("declared concept");
            if children.is_empty() {
                continue;
            }
            let (covered, missing): (Vec<&str>, Vec<&str>) = children
                .iter()
                .partition(|c| has_supported_schema(ontology, predicate, dom, c));
            if covered.len() >= min_evidence {
                out.push(Hypothesis {
                    predicate: predicate.to_string(),
                    dom: dom.to_string(),
                    parent_range: parent.id.clone(),
                    covered_children: covered.into_iter().map(String::from).collect(),
                    missing_children: missing.into_iter().map(String::from).collect(),
                    status: HypothesisStatus::Open,
                });
            }
        }
    }
    out
}

/// Searches the store for each missing child: pairs of a domain-typed
/// instance and a child-typed instance, restricted to the hypothesis
/// predicate. The first hit per child is recorded as a confirming
/// assertion and lifted.
pub fn confirm(
    hypothesis: &Hypothesis,
    store: &TripleStore,
    ontology: &mut Ontology,
    config: &EnrichmentConfig,
    stop_words: &StopWords,
) -> Result<(Hypothesis, Vec<DiscoveredAssertion>), EnrichError> {
    let mut h = hypothesis.clone();
    if h.status != HypothesisStatus::Open {
        return Ok((h, Vec::new()));
    }
    let predicate = Iri::new(h.predicate.as_str()).map_err(|e| OntologyError::Invalid {
        path: "hypothesis.predicate".into(),
        message: e.to_string(),
    })?;

    let mut ids: Vec<(String, String)> = ontology
        .instances()
        .iter()
        .map(|i| (i.id.clone(), i.concept.clone()))
        .collect();
    ids.sort();

    let mut confirmations = Vec::new();
    for child in hypothesis.missing_children.iter() {
        let mut pairs = Vec::new();
        for (x, cx) in &ids {
            if !ontology.is_subsumed_by(cx, &h.dom) {
                continue;
            }
            for (y, cy) in &ids {
                if y != x && ontology.is_subsumed_by(cy, child) {
                    pairs.push(InstancePair {
                        subject: x.clone(),
                        object: y.clone(),
                        min_token_distance: None,
                    });
                }
            }
        }
        let traces = {
            let searcher = Searcher::new(store, ontology, config, stop_words);
            run_searches(&searcher, &pairs, Some(&predicate), config.jobs)?
        };
        let Some(trace) = traces.iter().find(|t| t.hit().is_some()) else {
            continue;
        };
        let record = record_hit(
            ontology,
            &trace.subject,
            &trace.object,
            trace.hit().expect("hit"),
            AssertionSource::GeneralizationConfirmation,
            config.window,
        )?;
        confirmations.push(record);
        h.missing_children.retain(|c| c != child);
        h.covered_children.push(child.clone());
    }
    let order = ontology.children(&h.parent_range)?;
    h.covered_children
        .sort_by_key(|c| order.iter().position(|o| o == c));
    h.status = if h.missing_children.is_empty() {
        HypothesisStatus::Confirmed
    } else {
        HypothesisStatus::RefutedUnknown
    };
    Ok((h, confirmations))
}

/// Replaces the child schemas of a confirmed hypothesis by one parent
/// schema carrying the union of their supports. `None` when there is
/// nothing left to collapse.
pub fn collapse(ontology: &mut Ontology, hypothesis: &Hypothesis) -> Result<Option<CollapseRecord>, GeneralizeError> {
    if hypothesis.status != HypothesisStatus::Confirmed {
        return Err(GeneralizeError::NotConfirmed {
            predicate: hypothesis.predicate.clone(),
            dom: hypothesis.dom.clone(),
            parent_range: hypothesis.parent_range.clone(),
        });
    }
    let children: Vec<String> = ontology
        .children(&hypothesis.parent_range)?
        .into_iter()
        .map(String::from)
        .collect();
    let mut removed = Vec::new();
    for c in &children {
        if let Some(r) = ontology.remove_relation_schema(&hypothesis.predicate, &hypothesis.dom, c) {
            removed.push(r);
        }
    }
    if removed.is_empty() {
        return Ok(None);
    }
    let mut seen: HashSet<AssertionRef> = HashSet::new();
    let support: Vec<AssertionRef> = removed
        .iter()
        .flat_map(|r| r.support.iter().cloned())
        .filter(|s| seen.insert(s.clone()))
        .collect();
    ontology.add_relation_schema(RelationSchema {
        predicate: hypothesis.predicate.clone(),
        dom: hypothesis.dom.clone(),
        range: hypothesis.parent_range.clone(),
        support,
    })?;
    let into = ontology
        .relations()
        .iter()
        .find(|r| {
            r.predicate == hypothesis.predicate
                && r.dom == hypothesis.dom
                && r.range == hypothesis.parent_range
        })
        .cloned()
        .expect("just added");
    Ok(Some(CollapseRecord { into, removed }))
}

#[derive(Debug, Clone, Default)]
pub struct Generalization {
    pub hypotheses: Vec<Hypothesis>,
    pub confirmations: Vec<DiscoveredAssertion>,
    pub collapses: Vec<CollapseRecord>,
}

/// Runs `config.passes` rounds of hypothesize, confirm, collapse.
pub fn generalize(
    ontology: &mut Ontology,
    store: &TripleStore,
    config: &EnrichmentConfig,
    stop_words: &StopWords,
) -> Result<Generalization, EnrichError> {
    let mut out = Generalization::default();
    for _ in 0..config.passes {
        let hypotheses = hypothesize(ontology, config.min_evidence);
        if hypotheses.is_empty() {
            break;
        }
        for h in hypotheses {
            let (h, confirmations) = confirm(&h, store, ontology, config, stop_words)?;
            out.confirmations.extend(confirmations);
            if h.status == HypothesisStatus::Confirmed {
                if let Some(record) = collapse(ontology, &h)? {
                    out.collapses.push(record);
                }
            }
            out.hypotheses.push(h);
        }
    }
    Ok(out)
}
