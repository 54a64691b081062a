//! Plain-text tables for `ontoenrich report`.

use std::fmt::Write as _;

use ontoenrich_core::{EnrichmentReport, KnowledgeClass};
use serde::Serialize;

pub struct Filter<'a> {
    pub predicate: Option<&'a str>,
    pub concept: Option<&'a str>,
}

impl Filter<'_> {
    fn predicate_ok(&self, iri: &str) -> bool {
        self.predicate.is_none_or(|want| {
            iri == want || iri.rsplit(['#', '/']).next() == Some(want)
        })
    }

    fn concept_ok(&self, concepts: &[&str]) -> bool {
        self.concept.is_none_or(|want| concepts.contains(&want))
    }
}

/// kebab-case name of a serde enum value
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: Vec<&str>| {
        let mut s = String::from("  ");
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                let _ = write!(s, "{cell:<w$}  ");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

pub fn render(report: &EnrichmentReport, filter: &Filter) -> String {
    let mut out = String::new();
    let c = &report.counters;
    let _ = writeln!(
        out,
        "instances {}  pairs {} (pruned {})  hits {}  new assertions {}  budget-exhausted {}  reverse-only {}",
        c.instances, c.pairs, c.pairs_pruned, c.hits, c.new_assertions, c.budget_exhausted_pairs, c.reverse_only_pairs
    );

    let assertions: Vec<_> = report
        .assertions
        .iter()
        .filter(|a| filter.predicate_ok(&a.predicate))
        .filter(|a| filter.concept_ok(&[&a.subject_concept, &a.object_concept]))
        .collect();
    let _ = writeln!(out, "\nassertions: {}", assertions.len());
    for class in [KnowledgeClass::ThreeComponent, KnowledgeClass::TwoComponent, KnowledgeClass::OneComponent] {
        let rows: Vec<Vec<String>> = assertions
            .iter()
            .filter(|a| a.class == class)
            .map(|a| {
                vec![
                    a.subject.clone(),
                    a.predicate.clone(),
                    a.object.clone(),
                    format!("{} -> {}", a.subject_concept, a.object_concept),
                    tag(&a.source),
                ]
            })
            .collect();
        if !rows.is_empty() {
            let _ = writeln!(out, "{} ({})", tag(&class), rows.len());
            table(&mut out, &["SUBJECT", "PREDICATE", "OBJECT", "CONCEPTS", "SOURCE"], &rows);
        }
    }

    let schemas: Vec<Vec<String>> = report
        .schemas
        .iter()
        .filter(|s| filter.predicate_ok(&s.predicate))
        .filter(|s| filter.concept_ok(&[&s.dom, &s.range]))
        .map(|s| vec![s.predicate.clone(), s.dom.clone(), s.range.clone(), s.support.len().to_string()])
        .collect();
    let _ = writeln!(out, "\nschemas: {}", schemas.len());
    if !schemas.is_empty() {
        table(&mut out, &["PREDICATE", "DOM", "RANGE", "SUPPORT"], &schemas);
    }

    let hypotheses: Vec<Vec<String>> = report
        .hypotheses
        .iter()
        .filter(|h| filter.predicate_ok(&h.predicate))
        .filter(|h| {
            let mut concepts = vec![h.dom.as_str(), h.parent_range.as_str()];
            concepts.extend(h.covered_children.iter().map(String::as_str));
            concepts.extend(h.missing_children.iter().map(String::as_str));
            filter.concept_ok(&concepts)
        })
        .map(|h| {
            vec![
                h.predicate.clone(),
                h.dom.clone(),
                h.parent_range.clone(),
                tag(&h.status),
                h.covered_children.join(","),
                h.missing_children.join(","),
            ]
        })
        .collect();
    let _ = writeln!(out, "\nhypotheses: {}", hypotheses.len());
    if !hypotheses.is_empty() {
        table(&mut out, &["PREDICATE", "DOM", "PARENT", "STATUS", "COVERED", "MISSING"], &hypotheses);
    }

    // one-component facts carry no concepts, so a concept filter hides them
    let facts: Vec<Vec<String>> = report
        .one_component
        .iter()
        .filter(|f| filter.concept.is_none() && filter.predicate_ok(&f.predicate))
        .map(|f| vec![f.instance.clone(), f.resource.clone(), f.predicate.clone(), f.object.clone()])
        .collect();
    let _ = writeln!(out, "\none-component facts: {}", facts.len());
    if !facts.is_empty() {
        table(&mut out, &["INSTANCE", "RESOURCE", "PREDICATE", "OBJECT"], &facts);
    }
    out
}
