//! Random fixtures and brute-force oracles shared by the property and
//! acceptance suites. Nothing here calls into the store indexes or the
//! search code it is used to check.

#![allow(dead_code)]

pub mod ntcases;

use std::collections::HashSet;
use std::path::PathBuf;

use ontoenrich_core::rdf::{Iri, Literal, Term, Triple, RDFS_COMMENT, RDFS_LABEL};
use ontoenrich_core::{load_ontology, Ontology};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub fn geography_path() -> PathBuf {
    fixtures_dir().join("geography.json")
}

pub fn golden_path() -> PathBuf {
    fixtures_dir().join("golden.nt")
}

const NAMES: &[&str] = &[
    "Alder", "Birch Creek", "Cedar-Hill", "Dunmore", "Elm Falls", "Fennick", "Gorse Ridge", "Hazel",
    "Ivybridge", "Juniper Lake", "Kestrel", "Larch Point", "Maple-Ford", "Nettle", "Oakham",
    "Pinewood", "Quarry Bay", "Rowan", "Sorrel Peak", "Thistle", "Umber", "Vale Cross", "Willow",
    "Yarrow",
];

const WORDS: &[&str] = &[
    "river", "forest", "mountain", "city", "valley", "bridge", "north", "south", "ancient", "trade",
    "harbor", "plain", "spring", "winter", "market", "stone", "mill", "road", "lake", "tower",
    "the", "a", "of", "is", "in", "and",
];

const CONCEPTS: &[(&str, Option<&str>)] = &[
    ("thing", None),
    ("water", Some("thing")),
    ("land", Some("thing")),
    ("stream", Some("water")),
    ("pond", Some("water")),
    ("hill", Some("land")),
    ("town", Some("land")),
];

pub struct RandomFixture {
    pub ontology: Ontology,
    pub triples: Vec<Triple>,
}

fn words(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n)
        .map(|_| WORDS.choose(rng).unwrap().to_string())
        .collect()
}

/// Tokens as the engine defines them; reimplemented here on purpose.
pub fn oracle_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Filler vocabulary per concept, indexed like `CONCEPTS`. Text around an
/// instance and the comment of its canonical resource lean on the theme of
/// its concept, so gate scores spread over the whole `[0, 1]` range.
const THEMES: &[&[&str]] = &[
    &["thing", "object", "entity"],
    &["water", "wet", "flow"],
    &["land", "soil", "ground"],
    &["river", "current", "bank", "delta"],
    &["pond", "reed", "frog", "still"],
    &["hill", "slope", "summit", "rock"],
    &["town", "market", "church", "square"],
];

/// `n` filler words, each from `theme` with probability `coherence`.
fn themed(rng: &mut ChaCha8Rng, theme: usize, n: usize, coherence: f64) -> Vec<String> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(coherence) {
                THEMES[theme].choose(rng).unwrap().to_string()
            } else {
                WORDS.choose(rng).unwrap().to_string()
            }
        })
        .collect()
}

fn theme_of(concept: &str) -> usize {
    CONCEPTS.iter().position(|(c, _)| *c == concept).unwrap_or(0)
}

pub fn random_ontology(rng: &mut ChaCha8Rng, max_instances: usize) -> Ontology {
    random_ontology_with(rng, max_instances, 0.6)
}

fn random_ontology_with(rng: &mut ChaCha8Rng, max_instances: usize, coherence: f64) -> Ontology {
    let n = rng.gen_range(1..=max_instances.min(NAMES.len()));
    let mut names: Vec<&str> = NAMES.to_vec();
    names.shuffle(rng);
    names.truncate(n);
    let concepts: Vec<usize> = (0..n).map(|_| rng.gen_range(0..CONCEPTS.len())).collect();

    // Text: themed filler around instance names; some instances are left
    // out of the text entirely.
    let mut pieces: Vec<String> = Vec::new();
    for _ in 0..rng.gen_range(5..40) {
        if rng.gen_bool(0.7) {
            let k = rng.gen_range(0..n);
            let before = rng.gen_range(2..12);
            pieces.extend(themed(rng, concepts[k], before, coherence));
            pieces.push(names[k].to_string());
            let after = rng.gen_range(2..12);
            pieces.extend(themed(rng, concepts[k], after, coherence));
        } else {
            let k = rng.gen_range(1..6);
            pieces.extend(words(rng, k));
        }
    }
    let text = pieces.join(" ") + ".";
    let tokens = oracle_tokens(&text);

    let instances: Vec<serde_json::Value> = names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let label_tokens = oracle_tokens(name);
            let mentions: Vec<[usize; 2]> = (0..tokens.len())
                .filter(|&i| tokens[i..].starts_with(&label_tokens))
                .map(|i| [i, i + label_tokens.len()])
                .collect();
            serde_json::json!({
                "id": format!("i{k:02}"),
                "label": name,
                "concept": CONCEPTS[concepts[k]].0,
                "mentions": mentions,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "concepts": CONCEPTS.iter().map(|(c, _)| serde_json::json!({"id": c, "label": c})).collect::<Vec<_>>(),
        "subclass": CONCEPTS.iter().filter_map(|(c, p)| p.map(|p| serde_json::json!({"child": c, "parent": p}))).collect::<Vec<_>>(),
        "instances": instances,
        "text": text,
    });
    load_ontology(doc.to_string().as_bytes()).expect("generated ontology is valid")
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

/// Store over resources named after the instances (canonical IRIs, label-only
/// homonyms, hyphen/underscore variants) plus unrelated noise resources.
pub fn random_store(rng: &mut ChaCha8Rng, ontology: &Ontology, max_triples: usize) -> Vec<Triple> {
    random_store_with(rng, ontology, max_triples, 0.6)
}

fn random_store_with(rng: &mut ChaCha8Rng, ontology: &Ontology, max_triples: usize, coherence: f64) -> Vec<Triple> {
    let mut resources: Vec<Iri> = Vec::new();
    let mut triples: Vec<Triple> = Vec::new();
    let mut themes: Vec<Option<usize>> = Vec::new();
    for (k, inst) in ontology.instances().iter().enumerate() {
        if rng.gen_bool(0.85) {
            resources.push(iri(&format!("http://r.example/{}", inst.label.replace(' ', "_"))));
            themes.push(Some(theme_of(&inst.concept)));
        }
        if rng.gen_bool(0.4) {
            let homonym = iri(&format!("http://r.example/h{k}"));
            triples.push(Triple::new(homonym.clone(), iri(RDFS_LABEL), Literal::lang(inst.label.to_uppercase(), "en")));
            resources.push(homonym);
            themes.push(Some(rng.gen_range(0..THEMES.len())));
        }
    }
    for k in 0..rng.gen_range(0..6) {
        resources.push(iri(&format!("http://r.example/noise{k}")));
        themes.push(None);
    }
    if resources.is_empty() {
        return triples;
    }
    for (r, theme) in resources.clone().into_iter().zip(themes.clone()) {
        if rng.gen_bool(0.5 + 0.5 * coherence) {
            let k = rng.gen_range(1..8);
            let text = match theme {
                Some(t) => themed(rng, t, k, coherence),
                None => words(rng, k),
            };
            triples.push(Triple::new(r, iri(RDFS_COMMENT), Literal::plain(text.join(" "))));
        }
    }
    let preds: Vec<Iri> = (0..4).map(|k| iri(&format!("http://p.example/rel{k}"))).collect();
    let target = rng.gen_range(0..=max_triples.saturating_sub(triples.len()));
    for _ in 0..target {
        let si = rng.gen_range(0..resources.len());
        let p = preds.choose(rng).unwrap().clone();
        let o: Term = if rng.gen_bool(0.85) {
            // coherent fixtures mostly link resources that share a theme
            let same: Vec<usize> = (0..resources.len())
                .filter(|&j| j != si && themes[j].is_some() && themes[j] == themes[si])
                .collect();
            let oi = if !same.is_empty() && rng.gen_bool(coherence) {
                *same.choose(rng).unwrap()
            } else {
                rng.gen_range(0..resources.len())
            };
            resources[oi].clone().into()
        } else {
            Literal::plain(words(rng, 2).join(" ")).into()
        };
        triples.push(Triple::new(resources[si].clone(), p, o));
    }
    triples.shuffle(rng);
    triples
}

pub fn random_fixture(rng: &mut ChaCha8Rng, max_instances: usize, max_triples: usize) -> RandomFixture {
    // how closely text and comments stick to their concept's vocabulary;
    // varies per fixture so gate scores cover the whole [0, 1] range
    let coherence = rng.gen_range(0.2..1.0);
    let ontology = random_ontology_with(rng, max_instances, coherence);
    let triples = random_store_with(rng, &ontology, max_triples, coherence);
    RandomFixture { ontology, triples }
}

fn oracle_normalize(s: &str) -> String {
    s.replace(['_', '-'], " ")
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

fn oracle_local_name(iri: &str) -> &str {
    let trimmed = iri.trim_end_matches('/');
    let local = trimmed.rsplit(['#', '/']).next().unwrap_or(trimmed);
    if local.is_empty() {
        trimmed
    } else {
        local
    }
}

/// Every IRI in `triples` (subject or object position) that carries `name`
/// as its local name or as an rdfs:label. Linear scan.
pub fn oracle_named<'a>(triples: &'a [Triple], name: &str) -> HashSet<&'a Iri> {
    let want = oracle_normalize(name);
    let mut out = HashSet::new();
    for t in triples {
        for iri in [Some(&t.subject), t.object.as_iri()].into_iter().flatten() {
            if oracle_normalize(oracle_local_name(iri.as_str())) == want {
                out.insert(iri);
            }
        }
        if t.predicate.as_str() == RDFS_LABEL {
            if let Term::Literal(l) = &t.object {
                if oracle_normalize(&l.value) == want {
                    out.insert(&t.subject);
                }
            }
        }
    }
    out
}

/// First occurrence of each triple, in input order.
pub fn oracle_dedup(triples: &[Triple]) -> Vec<Triple> {
    let mut seen = HashSet::new();
    triples.iter().filter(|t| seen.insert(*t)).cloned().collect()
}

/// First triple of `unique` (see [`oracle_dedup`]) from a resource named
/// like the subject to an IRI named like the object.
pub fn oracle_find_predicate(unique: &[Triple], subject_label: &str, object_label: &str) -> Option<String> {
    let subjects = oracle_named(unique, subject_label);
    let objects = oracle_named(unique, object_label);
    unique
        .iter()
        .find(|t| subjects.contains(&t.subject) && t.object.as_iri().is_some_and(|o| objects.contains(o)))
        .map(|t| t.predicate.to_string())
}

/// Closest-mention distance by enumeration of every token position pair.
pub fn oracle_pair_qualifies(ontology: &Ontology, a: &str, b: &str, cap: usize) -> bool {
    let ma = &ontology.instance(a).unwrap().mentions;
    let mb = &ontology.instance(b).unwrap().mentions;
    for x in ma {
        for y in mb {
            let gap = if x.end <= y.start {
                y.start - x.end
            } else { x.start.saturating_sub(y.end) };
            if gap <= cap {
                return true;
            }
        }
    }
    false
}
