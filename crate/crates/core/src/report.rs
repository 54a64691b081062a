//! The machine-readable outcome of an enrichment run.

use serde::{Deserialize, Serialize};

use crate::enrichment::PairTrace;
use crate::generalize::{CollapseRecord, Hypothesis};
use crate::ontology::{AssertionRef, AssertionSource, KnowledgeClass, RelationSchema};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub instances: usize,
    pub pairs: usize,
    pub pairs_pruned: usize,
    pub hits: usize,
    pub new_assertions: usize,
    pub schemas_lifted: usize,
    pub schemas_after_collapse: usize,
    pub hypotheses: usize,
    pub hypotheses_confirmed: usize,
    pub budget_exhausted_pairs: usize,
    pub reverse_only_pairs: usize,
    pub triples_examined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveredAssertion {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub subject_concept: String,
    pub object_concept: String,
    pub class: KnowledgeClass,
    pub source: AssertionSource,
    pub subject_resource: String,
    pub object_resource: String,
    /// False when the ontology already held this assertion.
    pub new: bool,
}

impl DiscoveredAssertion {
    pub fn key(&self) -> AssertionRef {
        AssertionRef {
            subject: self.subject.clone(),
            predicate: self.predicate.clone(),
            object: self.object.clone(),
        }
    }
}

/// A store triple touching exactly one in-text instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneComponentFact {
    pub instance: String,
    pub resource: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrichmentReport {
    pub counters: Counters,
    pub assertions: Vec<DiscoveredAssertion>,
    /// Schemas as lifted from discovered assertions, before generalization.
    pub lifted_schemas: Vec<RelationSchema>,
    /// Schemas of the enriched ontology supported by this run's assertions.
    pub schemas: Vec<RelationSchema>,
    pub collapses: Vec<CollapseRecord>,
    pub hypotheses: Vec<Hypothesis>,
    pub one_component: Vec<OneComponentFact>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<PairTrace>,
}
