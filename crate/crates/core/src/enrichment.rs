//! Pair construction, predicate discovery, knowledge classification and
//! rule lifting.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, EnrichmentConfig};
use crate::context::{aggregate, instance_context, neighborhood_profiles, tokenize_raw, ContextProfile, StopWords};
use crate::generalize;
use crate::ontology::{Assertion, AssertionSource, KnowledgeClass, Ontology, OntologyError, RelationSchema};
use crate::rdf::{Iri, ScanBudget, Term, TripleStore};
use crate::report::{Counters, DiscoveredAssertion, EnrichmentReport, OneComponentFact};

#[derive(Debug, thiserror::Error)]
pub enum EnrichError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Generalize(#[from] crate::generalize::GeneralizeError),
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

/// An ordered (subject, object) candidate. `min_token_distance` is `None`
/// when either side has no mention in the text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstancePair {
    pub subject: String,
    pub object: String,
    pub min_token_distance: Option<usize>,
}

fn min_distance(ontology: &Ontology, a: &str, b: &str) -> Option<usize> {
    let ma = &ontology.instance(a).ok()?.mentions;
    let mb = &ontology.instance(b).ok()?.mentions;
    ma.iter()
        .flat_map(|x| mb.iter().map(move |y| x.distance(y)))
        .min()
}

/// Ordered pairs of distinct instances, sorted by (subject, object) id,
/// minus pairs whose closest mentions exceed the distance cap.
pub fn build_pair_set(ontology: &Ontology, config: &EnrichmentConfig) -> Vec<InstancePair> {
    let mut ids: Vec<&str> = ontology.instances().iter().map(|i| i.id.as_str()).collect();
    ids.sort_unstable();
    let mut out = Vec::new();
    for &s in &ids {
        for &o in &ids {
            if s == o {
                continue;
            }
            let d = min_distance(ontology, s, o);
            if let Some(cap) = config.distance_cap {
                if !matches!(d, Some(d) if d <= cap) {
                    continue;
                }
            }
            out.push(InstancePair {
                subject: s.to_string(),
                object: o.to_string(),
                min_token_distance: d,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub resource: String,
    pub score: f64,
    pub accepted: bool,
}

/// A store triple linking accepted subject and object resources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateHit {
    pub predicate: String,
    pub subject_resource: String,
    pub object_resource: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTrace {
    pub subject: String,
    pub object: String,
    pub min_token_distance: Option<usize>,
    pub subject_gates: Vec<GateOutcome>,
    pub object_gates: Vec<GateOutcome>,
    pub triples_examined: usize,
    pub budget_exhausted: bool,
    /// Every surviving triple, in store order; the first one is the hit.
    pub candidates: Vec<PredicateHit>,
    /// No hit here, but the reversed pair hit.
    #[serde(default)]
    pub reverse_hit: bool,
}

impl PairTrace {
    pub fn hit(&self) -> Option<&PredicateHit> {
        self.candidates.first()
    }
}

struct InstanceView {
    label: String,
    context: ContextProfile,
    gates: OnceLock<Vec<(Iri, GateOutcome)>>,
}

/// Read-only search state shared by all pair searches of one run.
pub struct Searcher<'a> {
    store: &'a TripleStore,
    config: &'a EnrichmentConfig,
    stop_words: &'a StopWords,
    instances: HashMap<String, InstanceView>,
}

impl<'a> Searcher<'a> {
    pub fn new(
        store: &'a TripleStore,
        ontology: &Ontology,
        config: &'a EnrichmentConfig,
        stop_words: &'a StopWords,
    ) -> Self {
        let instances = ontology
            .instances()
            .iter()
            .map(|i| {
                let context = instance_context(ontology, &i.id, config.window, stop_words)
                    .expect("instance exists");
                (
                    i.id.clone(),
                    InstanceView {
                        label: i.label.clone(),
                        context,
                        gates: OnceLock::new(),
                    },
                )
            })
            .collect();
        Searcher {
            store,
            config,
            stop_words,
            instances,
        }
    }

    fn view(&self, id: &str) -> Result<&InstanceView, OntologyError> {
        self.instances
            .get(id)
            .ok_or_else(|| OntologyError::UnknownInstance(id.to_string()))
    }

    /// Name-resolved resources for an instance, each scored against the
    /// instance's text context. Accepted when `score >= alpha`. Computed
    /// once per instance and reused by every pair that mentions it.
    pub fn gate(&self, instance: &str) -> Result<&[(Iri, GateOutcome)], OntologyError> {
        let view = self.view(instance)?;
        Ok(view.gates.get_or_init(|| {
            self.store
                .resolve_by_name(&view.label)
                .into_iter()
                .map(|r| {
                    let profiles = neighborhood_profiles(self.store, &r, self.stop_words);
                    let score = aggregate(&profiles, &view.context, self.config.similarity_mode);
                    let outcome = GateOutcome {
                        resource: r.to_string(),
                        score,
                        accepted: score >= self.config.alpha,
                    };
                    (r, outcome)
                })
                .collect()
        }))
    }

    /// Searches the store for triples from the subject's resources to the
    /// object's resources, optionally restricted to one predicate.
    pub fn search(&self, pair: &InstancePair, predicate: Option<&Iri>) -> Result<PairTrace, OntologyError> {
        let subject_gates = self.gate(&pair.subject)?;
        let object_gates = self.gate(&pair.object)?;
        let accepted_objects: HashSet<Term> = object_gates
            .iter()
            .filter(|(_, g)| g.accepted)
            .map(|(r, _)| Term::Iri(r.clone()))
            .collect();

        let mut budget = ScanBudget::new(self.config.scan_budget);
        let mut candidates = Vec::new();
        let mut exhausted = false;
        if !accepted_objects.is_empty() {
            for (resource, _) in subject_gates.iter().filter(|(_, g)| g.accepted) {
                let found = self.store.match_pattern(Some(resource), predicate, None, &mut budget);
                for e in &found.entries {
                    if accepted_objects.contains(&e.triple.object) {
                        candidates.push(PredicateHit {
                            predicate: e.triple.predicate.to_string(),
                            subject_resource: e.triple.subject.to_string(),
                            object_resource: e.triple.object.as_iri().expect("iri object").to_string(),
                            position: e.position,
                        });
                    }
                }
                if found.truncated {
                    exhausted = true;
                    break;
                }
            }
        }
        candidates.sort_by_key(|c| c.position);

        Ok(PairTrace {
            subject: pair.subject.clone(),
            object: pair.object.clone(),
            min_token_distance: pair.min_token_distance,
            subject_gates: subject_gates.iter().map(|(_, g)| g.clone()).collect(),
            object_gates: object_gates.iter().map(|(_, g)| g.clone()).collect(),
            triples_examined: budget.consumed(),
            budget_exhausted: exhausted,
            candidates,
            reverse_hit: false,
        })
    }

    /// Store triples of the instance's accepted resources whose IRI object
    /// names no instance of the ontology.
    fn one_component(&self, instance: &str, known: &HashSet<Iri>) -> Result<Vec<OneComponentFact>, OntologyError> {
        let mut out = Vec::new();
        let mut budget = ScanBudget::new(self.config.scan_budget);
        for (resource, g) in self.gate(instance)? {
            if !g.accepted {
                continue;
            }
            let found = self.store.match_pattern(Some(resource), None, None, &mut budget);
            for t in found.triples() {
                if let Term::Iri(o) = &t.object {
                    if !known.contains(o) {
                        out.push(OneComponentFact {
                            instance: instance.to_string(),
                            resource: resource.to_string(),
                            predicate: t.predicate.to_string(),
                            object: o.to_string(),
                        });
                    }
                }
            }
            if found.truncated {
                break;
            }
        }
        Ok(out)
    }
}

/// The predicate of the first store triple linking the pair, if any.
pub fn find_predicate(
    store: &TripleStore,
    ontology: &Ontology,
    pair: &InstancePair,
    config: &EnrichmentConfig,
    stop_words: &StopWords,
) -> Result<Option<PredicateHit>, OntologyError> {
    let searcher = Searcher::new(store, ontology, config, stop_words);
    Ok(searcher.search(pair, None)?.candidates.into_iter().next())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error("instance {0:?} is never mentioned in the text")]
    NotInText(String),
}

/// Two- or three-component classification of an assertion whose subject
/// and object both occur in the text.
///
/// Three-component when a subject mention and an object mention lie within
/// `window` tokens of each other and the span around them (widened by
/// `window` on both sides) holds, for every part of the predicate's local
/// name, a token starting with that part.
pub fn classify_knowledge(
    assertion: &Assertion,
    ontology: &Ontology,
    window: usize,
) -> Result<KnowledgeClass, ClassifyError> {
    let subject = ontology.instance(&assertion.subject)?;
    let object = ontology.instance(&assertion.object)?;
    for inst in [subject, object] {
        if inst.mentions.is_empty() {
            return Err(ClassifyError::NotInText(inst.id.clone()));
        }
    }
    let local = Iri::new(assertion.predicate.as_str())
        .map(|i| i.local_name().to_string())
        .unwrap_or_else(|_| assertion.predicate.clone());
    let parts = tokenize_raw(&local);
    if parts.is_empty() {
        return Ok(KnowledgeClass::TwoComponent);
    }
    let tokens = ontology.tokens();
    let own: HashSet<usize> = subject
        .mentions
        .iter()
        .chain(&object.mentions)
        .flat_map(|m| m.start..m.end)
        .collect();
    for ms in &subject.mentions {
        for mo in &object.mentions {
            if ms.distance(mo) > window {
                continue;
            }
            let from = ms.start.min(mo.start).saturating_sub(window);
            let to = (ms.end.max(mo.end) + window).min(tokens.len());
            let region: Vec<&str> = (from..to)
                .filter(|at| !own.contains(at))
                .map(|at| tokens[at].as_str())
                .collect();
            if parts
                .iter()
                .all(|p| region.iter().any(|t| t.starts_with(p.as_str())))
            {
                return Ok(KnowledgeClass::ThreeComponent);
            }
        }
    }
    Ok(KnowledgeClass::TwoComponent)
}

/// Classification for discovered links: an endpoint absent from the text
/// leaves only one in-text component.
fn classify_discovered(assertion: &Assertion, ontology: &Ontology, window: usize) -> Result<KnowledgeClass, OntologyError> {
    match classify_knowledge(assertion, ontology, window) {
        Ok(c) => Ok(c),
        Err(ClassifyError::NotInText(_)) => Ok(KnowledgeClass::OneComponent),
        Err(ClassifyError::Ontology(e)) => Err(e),
    }
}

/// The concept-level rule supported by `assertion`.
pub fn lift_rule(assertion: &Assertion, ontology: &Ontology) -> Result<RelationSchema, OntologyError> {
    Ok(RelationSchema {
        predicate: assertion.predicate.clone(),
        dom: ontology.concept_of(&assertion.subject)?.to_string(),
        range: ontology.concept_of(&assertion.object)?.to_string(),
        support: vec![assertion.key()],
    })
}

/// Adds a lifted schema. When a generalized schema with the same predicate
/// and domain already covers the range, the support joins that schema.
pub(crate) fn absorb_schema(ontology: &mut Ontology, schema: RelationSchema) -> Result<(), OntologyError> {
    let covering = ontology
        .relations()
        .iter()
        .find(|r| {
            r.predicate == schema.predicate
                && r.dom == schema.dom
                && r.range != schema.range
                && ontology.is_subsumed_by(&schema.range, &r.range)
        })
        .map(|r| r.range.clone());
    match covering {
        Some(range) => ontology.add_relation_schema(RelationSchema { range, ..schema }),
        None => ontology.add_relation_schema(schema),
    }
}

pub(crate) fn run_searches(
    searcher: &Searcher<'_>,
    pairs: &[InstancePair],
    predicate: Option<&Iri>,
    jobs: usize,
) -> Result<Vec<PairTrace>, EnrichError> {
    if jobs <= 1 {
        return pairs
            .iter()
            .map(|p| searcher.search(p, predicate).map_err(EnrichError::from))
            .collect();
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| EnrichError::Workers(e.to_string()))?;
    pool.install(|| {
        pairs
            .par_iter()
            .map(|p| searcher.search(p, predicate).map_err(EnrichError::from))
            .collect()
    })
}

/// Discovery over an explicit pair list: search every pair, record hits as
/// assertions and lift them into schemas.
pub fn discover(
    ontology: &mut Ontology,
    store: &TripleStore,
    config: &EnrichmentConfig,
    stop_words: &StopWords,
    pairs: &[InstancePair],
) -> Result<(Vec<PairTrace>, Vec<DiscoveredAssertion>), EnrichError> {
    config.validate()?;
    let mut traces = {
        let searcher = Searcher::new(store, ontology, config, stop_words);
        run_searches(&searcher, pairs, None, config.jobs)?
    };

    let hits: HashSet<(String, String)> = traces
        .iter()
        .filter(|t| t.hit().is_some())
        .map(|t| (t.subject.clone(), t.object.clone()))
        .collect();
    for t in traces.iter_mut() {
        t.reverse_hit = t.hit().is_none() && hits.contains(&(t.object.clone(), t.subject.clone()));
    }

    let mut discovered = Vec::new();
    for t in &traces {
        let Some(hit) = t.hit() else { continue };
        let record = record_hit(ontology, &t.subject, &t.object, hit, AssertionSource::LinkedData, config.window)?;
        discovered.push(record);
    }
    Ok((traces, discovered))
}

pub(crate) fn record_hit(
    ontology: &mut Ontology,
    subject: &str,
    object: &str,
    hit: &PredicateHit,
    source: AssertionSource,
    window: usize,
) -> Result<DiscoveredAssertion, OntologyError> {
    let mut assertion = Assertion {
        subject: subject.to_string(),
        predicate: hit.predicate.clone(),
        object: object.to_string(),
        class: KnowledgeClass::TwoComponent,
        source,
    };
    assertion.class = classify_discovered(&assertion, ontology, window)?;
    let schema = lift_rule(&assertion, ontology)?;
    let record = DiscoveredAssertion {
        subject: assertion.subject.clone(),
        predicate: assertion.predicate.clone(),
        object: assertion.object.clone(),
        subject_concept: schema.dom.clone(),
        object_concept: schema.range.clone(),
        class: assertion.class,
        source,
        subject_resource: hit.subject_resource.clone(),
        object_resource: hit.object_resource.clone(),
        new: false,
    };
    let new = ontology.add_assertion(assertion)?;
    absorb_schema(ontology, schema)?;
    Ok(DiscoveredAssertion { new, ..record })
}

/// Full pipeline: pairs, predicate discovery, lifting, generalization.
pub fn enrich(
    ontology: &Ontology,
    store: &TripleStore,
    config: &EnrichmentConfig,
    stop_words: &StopWords,
) -> Result<(Ontology, EnrichmentReport), EnrichError> {
    config.validate()?;
    let mut enriched = ontology.clone();
    let n = ontology.instances().len();
    let pairs = build_pair_set(ontology, config);

    let (trace, mut assertions) = discover(&mut enriched, store, config, stop_words, &pairs)?;
    let hits = assertions.len();
    let lifted_schemas = touched_schemas(&enriched, &assertions);

    let outcome = generalize::generalize(&mut enriched, store, config, stop_words)?;
    assertions.extend(outcome.confirmations.iter().cloned());

    let one_component = {
        let searcher = Searcher::new(store, &enriched, config, stop_words);
        let mut known: HashSet<Iri> = HashSet::new();
        for i in enriched.instances() {
            known.extend(store.resolve_by_name(&i.label));
        }
        let mut ids: Vec<&str> = enriched.instances().iter().map(|i| i.id.as_str()).collect();
        ids.sort_unstable();
        let mut facts = Vec::new();
        for id in ids {
            facts.extend(searcher.one_component(id, &known)?);
        }
        facts
    };

    let schemas = touched_schemas(&enriched, &assertions);
    let counters = Counters {
        instances: n,
        pairs: pairs.len(),
        pairs_pruned: n * n.saturating_sub(1) - pairs.len(),
        hits,
        new_assertions: assertions.iter().filter(|a| a.new).count(),
        schemas_lifted: lifted_schemas.len(),
        schemas_after_collapse: schemas.len(),
        hypotheses: outcome.hypotheses.len(),
        hypotheses_confirmed: outcome
            .hypotheses
            .iter()
            .filter(|h| h.status == generalize::HypothesisStatus::Confirmed)
            .count(),
        budget_exhausted_pairs: trace.iter().filter(|t| t.budget_exhausted).count(),
        reverse_only_pairs: trace.iter().filter(|t| t.reverse_hit).count(),
        triples_examined: trace.iter().map(|t| t.triples_examined).sum(),
    };
    let report = EnrichmentReport {
        counters,
        assertions,
        lifted_schemas,
        schemas,
        collapses: outcome.collapses,
        hypotheses: outcome.hypotheses,
        one_component,
        trace,
    };
    Ok((enriched, report))
}

/// Schemas of `ontology` supported by at least one of `assertions`.
fn touched_schemas(ontology: &Ontology, assertions: &[DiscoveredAssertion]) -> Vec<RelationSchema> {
    let keys: HashSet<_> = assertions.iter().map(|a| a.key()).collect();
    ontology
        .relations()
        .iter()
        .filter(|r| r.support.iter().any(|s| keys.contains(s)))
        .cloned()
        .collect()
}
