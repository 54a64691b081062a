//! Enrichment of a text-derived ontology with non-taxonomic relations
//! found between its instances in a local RDF dataset.
//!
//! The pipeline pairs every two instances, looks for a store triple that
//! links resources named like them (each resource vetted by comparing its
//! neighborhood text with the instance's context in the source text),
//! records each hit as an assertion, lifts it to a concept-level schema and
//! finally generalizes sibling schemas up the taxonomy.

pub mod config;
pub mod context;
pub mod enrichment;
pub mod generalize;
pub mod ontology;
pub mod rdf;
pub mod report;

pub use config::{ConfigError, EnrichmentConfig};
pub use context::{ContextProfile, SimilarityMode, StopWords};
pub use enrichment::{
    build_pair_set, classify_knowledge, discover, enrich, find_predicate, lift_rule, EnrichError,
    InstancePair, PairTrace, PredicateHit, Searcher,
};
pub use generalize::{collapse, confirm, hypothesize, Hypothesis, HypothesisStatus};
pub use ontology::{
    load_ontology, save_ontology, Assertion, AssertionRef, AssertionSource, KnowledgeClass,
    Ontology, OntologyError, RelationSchema,
};
pub use rdf::{Iri, Literal, ScanBudget, Term, Triple, TripleStore};
pub use report::{Counters, EnrichmentReport};
