//! The intermediate ontology: concepts, taxonomy, typed instances with text
//! mentions, relation schemas and instance-level assertions.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::context::tokenize_raw;
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("{path}: duplicate concept id {id:?}")]
    DuplicateConcept { path: String, id: String },
    #[error("{path}: instance {id:?} is declared with more than one concept")]
    MultiTyped { path: String, id: String },
    #[error("{path}: unknown {kind} {id:?}")]
    DanglingReference {
        path: String,
        kind: &'static str,
        id: String,
    },
    #[error("taxonomy cycle: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("unknown concept {0:?}")]
    UnknownConcept(String),
    #[error("assertion subject and object are both {0:?}")]
    SelfAssertion(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubclassEdge {
    pub child: String,
    pub parent: String,
}

/// Half-open token span `[start, end)` into the tokenized source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Mention {
    pub start: usize,
    pub end: usize,
}

impl Mention {
    pub fn new(start: usize, end: usize) -> Self {
        Mention { start, end }
    }

    /// Number of tokens strictly between the two spans; 0 when adjacent or overlapping.
    pub fn distance(&self, other: &Mention) -> usize {
        if self.end <= other.start {
            other.start - self.end
        } else { self.start.saturating_sub(other.end) }
    }
}

impl From<(usize, usize)> for Mention {
    fn from((start, end): (usize, usize)) -> Self {
        Mention { start, end }
    }
}

impl From<Mention> for (usize, usize) {
    fn from(m: Mention) -> Self {
        (m.start, m.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    pub label: String,
    pub concept: String,
    #[serde(default)]
    pub mentions: Vec<Mention>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnowledgeClass {
    OneComponent,
    TwoComponent,
    ThreeComponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssertionSource {
    Text,
    LinkedData,
    GeneralizationConfirmation,
}

/// Identity of an assertion, used as schema support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AssertionRef {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub class: KnowledgeClass,
    pub source: AssertionSource,
}

impl Assertion {
    pub fn key(&self) -> AssertionRef {
        AssertionRef {
            subject: self.subject.clone(),
            predicate: self.predicate.clone(),
            object: self.object.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSchema {
    pub predicate: String,
    pub dom: String,
    pub range: String,
    #[serde(default)]
    pub support: Vec<AssertionRef>,
}

impl RelationSchema {
    pub fn same_signature(&self, other: &RelationSchema) -> bool {
        self.predicate == other.predicate && self.dom == other.dom && self.range == other.range
    }
}

/// Serialized form; field names are the on-disk schema.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct OntologyDoc {
    concepts: Vec<Concept>,
    #[serde(default)]
    subclass: Vec<SubclassEdge>,
    instances: Vec<RawInstance>,
    #[serde(default)]
    relations: Vec<RelationSchema>,
    #[serde(default)]
    assertions: Vec<Assertion>,
    #[serde(default)]
    text: String,
}

/// Accepts a list in `concept` only to reject it with a precise error.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawInstance {
    id: String,
    label: String,
    concept: ConceptField,
    #[serde(default)]
    mentions: Vec<Mention>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ConceptField {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Default)]
pub struct Ontology {
    concepts: Vec<Concept>,
    subclass: Vec<SubclassEdge>,
    instances: Vec<Instance>,
    relations: Vec<RelationSchema>,
    assertions: Vec<Assertion>,
    text: String,
    tokens: Vec<String>,
    concept_index: HashMap<String, usize>,
    instance_index: HashMap<String, usize>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.concepts == other.concepts
            && self.subclass == other.subclass
            && self.instances == other.instances
            && self.relations == other.relations
            && self.assertions == other.assertions
            && self.text == other.text
    }
}

pub fn load_ontology(input: &[u8]) -> Result<Ontology, OntologyError> {
    let de = &mut serde_json::Deserializer::from_slice(input);
    let doc: OntologyDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        OntologyError::Json {
            path: format!("$.{path}").trim_end_matches('.').to_string(),
            message: e.into_inner().to_string(),
        }
    })?;
    Ontology::from_doc(doc)
}

pub fn save_ontology(ontology: &Ontology) -> String {
    let doc = OntologyDoc {
        concepts: ontology.concepts.clone(),
        subclass: ontology.subclass.clone(),
        instances: ontology
            .instances
            .iter()
            .map(|i| RawInstance {
                id: i.id.clone(),
                label: i.label.clone(),
                concept: ConceptField::One(i.concept.clone()),
                mentions: i.mentions.clone(),
            })
            .collect(),
        relations: ontology.relations.clone(),
        assertions: ontology.assertions.clone(),
        text: ontology.text.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("ontology serializes");
    out.push('\n');
    out
}

fn invalid(path: String, message: impl Into<String>) -> OntologyError {
    OntologyError::Invalid {
        path,
        message: message.into(),
    }
}

impl Ontology {
    fn from_doc(doc: OntologyDoc) -> Result<Self, OntologyError> {
        let mut o = Ontology {
            tokens: tokenize_raw(&doc.text),
            text: doc.text,
            ..Default::default()
        };

        for (i, c) in doc.concepts.into_iter().enumerate() {
            let path = format!("$.concepts[{i}].id");
            if c.id.is_empty() {
                return Err(invalid(path, "empty concept id"));
            }
            if o.concept_index.insert(c.id.clone(), i).is_some() {
                return Err(OntologyError::DuplicateConcept { path, id: c.id });
            }
            o.concepts.push(c);
        }

        for (i, e) in doc.subclass.iter().enumerate() {
            o.require_concept(&e.child, || format!("$.subclass[{i}].child"))?;
            o.require_concept(&e.parent, || format!("$.subclass[{i}].parent"))?;
            if o.subclass.contains(e) {
                continue;
            }
            o.subclass.push(e.clone());
        }
        if let Some(cycle) = o.find_cycle() {
            return Err(OntologyError::Cycle { cycle });
        }

        for (i, raw) in doc.instances.into_iter().enumerate() {
            let concept = match raw.concept {
                ConceptField::One(c) => c,
                ConceptField::Many(cs) if cs.len() == 1 => cs.into_iter().next().unwrap(),
                ConceptField::Many(_) => {
                    return Err(OntologyError::MultiTyped {
                        path: format!("$.instances[{i}].concept"),
                        id: raw.id,
                    })
                }
            };
            let instance = Instance {
                id: raw.id,
                label: raw.label,
                concept,
                mentions: raw.mentions,
            };
            o.push_instance(instance, i)?;
        }

        for (i, a) in doc.assertions.into_iter().enumerate() {
            o.check_assertion(&a, &|| format!("$.assertions[{i}]"))?;
            if o.assertions.iter().any(|b| b.key() == a.key()) {
                continue;
            }
            o.assertions.push(a);
        }

        for (i, r) in doc.relations.into_iter().enumerate() {
            o.check_schema(&r, &|| format!("$.relations[{i}]"))?;
            o.merge_schema(r);
        }
        Ok(o)
    }

    fn push_instance(&mut self, instance: Instance, i: usize) -> Result<(), OntologyError> {
        if instance.id.is_empty() {
            return Err(invalid(format!("$.instances[{i}].id"), "empty instance id"));
        }
        if self.instance_index.contains_key(&instance.id) {
            return Err(OntologyError::MultiTyped {
                path: format!("$.instances[{i}].id"),
                id: instance.id,
            });
        }
        if instance.label.trim().is_empty() {
            return Err(invalid(format!("$.instances[{i}].label"), "empty label"));
        }
        self.require_concept(&instance.concept, || format!("$.instances[{i}].concept"))?;
        for (j, m) in instance.mentions.iter().enumerate() {
            if !(m.start < m.end && m.end <= self.tokens.len()) {
                return Err(invalid(
                    format!("$.instances[{i}].mentions[{j}]"),
                    format!(
                        "mention [{}, {}) outside text of {} tokens",
                        m.start,
                        m.end,
                        self.tokens.len()
                    ),
                ));
            }
        }
        self.instance_index.insert(instance.id.clone(), self.instances.len());
        self.instances.push(instance);
        Ok(())
    }

    fn require_concept(&self, id: &str, path: impl Fn() -> String) -> Result<(), OntologyError> {
        if self.concept_index.contains_key(id) {
            Ok(())
        } else {
            Err(OntologyError::DanglingReference {
                path: path(),
                kind: "concept",
                id: id.to_string(),
            })
        }
    }

    fn require_instance(&self, id: &str, path: impl Fn() -> String) -> Result<(), OntologyError> {
        if self.instance_index.contains_key(id) {
            Ok(())
        } else {
            Err(OntologyError::DanglingReference {
                path: path(),
                kind: "instance",
                id: id.to_string(),
            })
        }
    }

    fn check_assertion(&self, a: &Assertion, path: &dyn Fn() -> String) -> Result<(), OntologyError> {
        self.require_instance(&a.subject, || format!("{}.subject", path()))?;
        self.require_instance(&a.object, || format!("{}.object", path()))?;
        if a.subject == a.object {
            return Err(OntologyError::SelfAssertion(a.subject.clone()));
        }
        if Iri::new(a.predicate.as_str()).is_err() {
            return Err(invalid(format!("{}.predicate", path()), "predicate is not an IRI"));
        }
        Ok(())
    }

    fn check_schema(&self, r: &RelationSchema, path: &dyn Fn() -> String) -> Result<(), OntologyError> {
        if Iri::new(r.predicate.as_str()).is_err() {
            return Err(invalid(format!("{}.predicate", path()), "predicate is not an IRI"));
        }
        self.require_concept(&r.dom, || format!("{}.dom", path()))?;
        self.require_concept(&r.range, || format!("{}.range", path()))?;
        for (j, s) in r.support.iter().enumerate() {
            if !self.assertions.iter().any(|a| &a.key() == s) {
                return Err(OntologyError::DanglingReference {
                    path: format!("{}.support[{j}]", path()),
                    kind: "assertion",
                    id: format!("({}, {}, {})", s.subject, s.predicate, s.object),
                });
            }
        }
        Ok(())
    }

    fn merge_schema(&mut self, r: RelationSchema) {
        match self.relations.iter_mut().find(|s| s.same_signature(&r)) {
            Some(existing) => {
                for s in r.support {
                    if !existing.support.contains(&s) {
                        existing.support.push(s);
                    }
                }
            }
            None => {
                let mut r = r;
                let mut seen = HashSet::new();
                r.support.retain(|s| seen.insert(s.clone()));
                self.relations.push(r);
            }
        }
    }

    /// Depth-first search over parent edges; returns the cycle path if any.
    fn find_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut marks = vec![Mark::New; self.concepts.len()];
        let mut stack: Vec<usize> = Vec::new();

        fn visit(
            o: &Ontology,
            at: usize,
            marks: &mut [Mark],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<String>> {
            marks[at] = Mark::Active;
            stack.push(at);
            let id = &o.concepts[at].id;
            for e in o.subclass.iter().filter(|e| &e.child == id) {
                let next = o.concept_index[&e.parent];
                match marks[next] {
                    Mark::Active => {
                        let from = stack.iter().position(|&s| s == next).unwrap();
                        let mut cycle: Vec<String> =
                            stack[from..].iter().map(|&s| o.concepts[s].id.clone()).collect();
                        cycle.push(o.concepts[next].id.clone());
                        return Some(cycle);
                    }
                    Mark::New => {
                        if let Some(c) = visit(o, next, marks, stack) {
                            return Some(c);
                        }
                    }
                    Mark::Done => {}
                }
            }
            stack.pop();
            marks[at] = Mark::Done;
            None
        }

        for start in 0..self.concepts.len() {
            if marks[start] == Mark::New {
                if let Some(c) = visit(self, start, &mut marks, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn subclass_edges(&self) -> &[SubclassEdge] {
        &self.subclass
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn relations(&self) -> &[RelationSchema] {
        &self.relations
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Source text tokens, stop words included; mentions index into this.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn instance(&self, id: &str) -> Result<&Instance, OntologyError> {
        self.instance_index
            .get(id)
            .map(|&i| &self.instances[i])
            .ok_or_else(|| OntologyError::UnknownInstance(id.to_string()))
    }

    pub fn concept(&self, id: &str) -> Result<&Concept, OntologyError> {
        self.concept_index
            .get(id)
            .map(|&i| &self.concepts[i])
            .ok_or_else(|| OntologyError::UnknownConcept(id.to_string()))
    }

    pub fn concept_of(&self, instance: &str) -> Result<&str, OntologyError> {
        self.instance(instance).map(|i| i.concept.as_str())
    }

    pub fn children(&self, concept: &str) -> Result<Vec<&str>, OntologyError> {
        self.concept(concept)?;
        Ok(self
            .subclass
            .iter()
            .filter(|e| e.parent == concept)
            .map(|e| e.child.as_str())
            .collect())
    }

    /// First declared parent; concepts may have several in a DAG.
    pub fn parent(&self, concept: &str) -> Result<Option<&str>, OntologyError> {
        self.concept(concept)?;
        Ok(self
            .subclass
            .iter()
            .find(|e| e.child == concept)
            .map(|e| e.parent.as_str()))
    }

    /// True when `ancestor` is `concept` or reachable from it via parent edges.
    pub fn is_subsumed_by(&self, concept: &str, ancestor: &str) -> bool {
        let mut seen = HashSet::new();
        let mut todo = vec![concept];
        while let Some(c) = todo.pop() {
            if c == ancestor {
                return true;
            }
            if !seen.insert(c) {
                continue;
            }
            todo.extend(
                self.subclass
                    .iter()
                    .filter(|e| e.child == c)
                    .map(|e| e.parent.as_str()),
            );
        }
        false
    }

    pub fn find_assertion(&self, key: &AssertionRef) -> Option<&Assertion> {
        self.assertions.iter().find(|a| &a.key() == key)
    }

    /// Adds an assertion unless one with the same (subject, predicate, object)
    /// exists. Returns whether it was new.
    pub fn add_assertion(&mut self, a: Assertion) -> Result<bool, OntologyError> {
        self.check_assertion(&a, &|| "assertion".to_string())?;
        if self.find_assertion(&a.key()).is_some() {
            return Ok(false);
        }
        self.assertions.push(a);
        Ok(true)
    }

    /// Adds a schema, merging supports into an existing schema with the same
    /// (predicate, dom, range).
    pub fn add_relation_schema(&mut self, r: RelationSchema) -> Result<(), OntologyError> {
        self.check_schema(&r, &|| "relation".to_string())?;
        self.merge_schema(r);
        Ok(())
    }

    pub fn remove_relation_schema(
        &mut self,
        predicate: &str,
        dom: &str,
        range: &str,
    ) -> Option<RelationSchema> {
        let at = self
            .relations
            .iter()
            .position(|r| r.predicate == predicate && r.dom == dom && r.range == range)?;
        Some(self.relations.remove(at))
    }
}
