//! Versioned JSON export shared by every substrate and command.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use multiway_core::causal::{CausalInvarianceReport, MultiwayCausalGraph, Verdict};
use multiway_core::homotopy::{ClosureReport, Cube, Side, Square, Witness};
use multiway_core::multiway::{BranchialGraph, MultiwayGraph};
use multiway_core::rewrite::{Event, Rule, Substrate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub substrate: String,
    #[serde(default)]
    pub rules: Vec<RuleEntry>,
    pub states: Vec<StateEntry>,
    pub events: Vec<EventEntry>,
    pub edges: Vec<EdgeEntry>,
    pub cells: Vec<CellEntry>,
    pub reports: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEntry {
    pub id: String,
    pub level: u32,
    pub lhs: String,
    pub rhs: String,
    pub anchored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateEntry {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub initial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEntry {
    pub id: usize,
    pub rule: String,
    pub level: u32,
    pub source: String,
    pub target: String,
    pub generation: u32,
    pub binding: String,
    pub consumed: Vec<u64>,
    pub produced: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Evolution,
    Causal,
    Branchial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub kind: EdgeKind,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Square,
    Cube,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideEntry {
    pub from: String,
    pub to: String,
    pub level: u32,
    /// Event ids along the side; empty for an identity.
    pub events: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub kind: CellKind,
    pub corners: Vec<String>,
    pub sides: Vec<SideEntry>,
}

fn side_entry(s: &Side) -> SideEntry {
    let events = match &s.witness {
        Witness::Identity => Vec::new(),
        Witness::Edge(e) => vec![e.0],
        Witness::Path(p) => p.iter().map(|e| e.0).collect(),
    };
    SideEntry {
        from: s.from.to_string(),
        to: s.to.to_string(),
        level: s.level,
        events,
    }
}

pub fn rule_entry(r: &Rule) -> RuleEntry {
    RuleEntry {
        id: r.id.clone(),
        level: r.level,
        lhs: r.lhs_text(),
        rhs: r.rhs_text(),
        anchored: r.is_anchored(),
    }
}

pub fn event_entry(e: &Event) -> EventEntry {
    EventEntry {
        id: e.id.0,
        rule: e.rule_id.clone(),
        level: e.level,
        source: e.source.to_string(),
        target: e.target.to_string(),
        generation: e.generation,
        binding: e.binding.to_string(),
        consumed: e.consumed.iter().map(|t| t.0).collect(),
        produced: e.produced.iter().map(|t| t.0).collect(),
    }
}

impl Document {
    pub fn new(substrate: Substrate) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            substrate: substrate.to_string(),
            rules: Vec::new(),
            states: Vec::new(),
            events: Vec::new(),
            edges: Vec::new(),
            cells: Vec::new(),
            reports: BTreeMap::new(),
        }
    }

    /// States, events and one evolution edge per event.
    pub fn from_graph(g: &MultiwayGraph) -> Self {
        let mut doc = Document::new(g.substrate);
        doc.rules = g.rules.iter().map(rule_entry).collect();
        doc.states = g
            .states
            .iter()
            .map(|(k, e)| StateEntry {
                key: k.to_string(),
                generation: Some(e.generation),
                initial: g.initial.contains(k),
            })
            .collect();
        doc.events = g.events.iter().map(event_entry).collect();
        doc.edges = g
            .events
            .iter()
            .map(|e| EdgeEntry {
                kind: EdgeKind::Evolution,
                source: e.source.to_string(),
                target: e.target.to_string(),
                level: Some(e.level),
                event: Some(e.id.0),
                weight: None,
                slice: None,
            })
            .collect();
        doc.reports.insert(
            "evolution".into(),
            json!({
                "steps": g.steps,
                "states": g.states.len(),
                "events": g.events.len(),
                "generation_counts": g.generation_counts(),
            }),
        );
        doc
    }

    /// Causal edges between events, named `e{id}`.
    pub fn add_causal(&mut self, overlay: &MultiwayCausalGraph) {
        self.edges.extend(overlay.causal.iter().map(|c| EdgeEntry {
            kind: EdgeKind::Causal,
            source: c.from.to_string(),
            target: c.to.to_string(),
            level: None,
            event: None,
            weight: Some(c.witness.len()),
            slice: None,
        }));
    }

    pub fn add_branchial(&mut self, b: &BranchialGraph) {
        self.edges.extend(b.edges.iter().map(|e| EdgeEntry {
            kind: EdgeKind::Branchial,
            source: b.vertices[e.a].to_string(),
            target: b.vertices[e.b].to_string(),
            level: None,
            event: None,
            weight: Some(e.weight),
            slice: Some(b.slice),
        }));
    }

    pub fn add_squares(&mut self, squares: &[Square]) {
        self.cells.extend(squares.iter().map(|q| CellEntry {
            kind: CellKind::Square,
            corners: q.corners.iter().map(|k| k.to_string()).collect(),
            sides: q.vertical.iter().chain(&q.horizontal).map(side_entry).collect(),
        }));
    }

    pub fn add_cubes(&mut self, cubes: &[Cube]) {
        self.cells.extend(cubes.iter().map(|c| CellEntry {
            kind: CellKind::Cube,
            corners: c.corners.iter().map(|k| k.to_string()).collect(),
            sides: c.sides.iter().map(side_entry).collect(),
        }));
    }

    pub fn report(&mut self, name: &str, value: Value) {
        self.reports.insert(name.to_string(), value);
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Invariant => "invariant",
        Verdict::NotInvariant => "not-invariant",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn causal_report(r: &CausalInvarianceReport) -> Value {
    json!({
        "verdict": verdict_name(r.verdict),
        "invariant": match r.verdict {
            Verdict::Invariant => Value::Bool(true),
            Verdict::NotInvariant => Value::Bool(false),
            Verdict::Inconclusive => Value::Null,
        },
        "depth": r.depth,
        "labeled": r.labeled,
        "paths": r.paths,
        "distinct_certificates": r.distinct_certificates,
        "witness": r.witness.as_ref().map(|(a, b)| json!([a, b])),
    })
}

pub fn closure_report(r: &ClosureReport) -> Value {
    json!({
        "dimension": r.dimension,
        "cells_checked": r.cells_checked,
        "closed": r.is_closed(),
        "violations": r.violations,
    })
}

/// Pretty JSON with a trailing newline.
pub fn export_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn import_json(text: &str) -> Result<Document, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use multiway_core::causal::multiway_causal_graph;
    use multiway_core::homotopy::find_squares;
    use multiway_core::multiway::evolve;
    use multiway_core::rewrite::State;

    fn string_graph(steps: usize) -> MultiwayGraph {
        let rules = vec![
            Rule::string("r1", "A", "AB"),
            Rule::whole(
                "h1",
                State::parse(Substrate::String, "AAB").unwrap(),
                State::parse(Substrate::String, "ABA").unwrap(),
            )
            .unwrap()
            .with_level(1),
        ];
        evolve(&[State::parse(Substrate::String, "AA").unwrap()], &rules, steps).unwrap()
    }

    #[test]
    fn round_trip_preserves_keys() {
        let g = string_graph(3);
        let mut doc = Document::from_graph(&g);
        doc.add_causal(&multiway_causal_graph(&g));
        doc.add_squares(&find_squares(&g));
        let text = export_json(&doc);
        let back = import_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(export_json(&back), text);
        let keys: Vec<&str> = back.states.iter().map(|s| s.key.as_str()).collect();
        let want: Vec<&str> = g.states.keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, want);
    }

    #[test]
    fn schema_fields() {
        let g = string_graph(2);
        let mut doc = Document::from_graph(&g);
        doc.add_squares(&find_squares(&g));
        let v: Value = serde_json::from_str(&export_json(&doc)).unwrap();
        for field in [
            "schema_version",
            "substrate",
            "states",
            "events",
            "edges",
            "cells",
            "reports",
        ] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert_eq!(v["schema_version"], 1);
        let square = v["cells"].as_array().unwrap().first().unwrap();
        assert_eq!(square["kind"], "square");
        assert_eq!(square["corners"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn causal_report_has_verdict_and_depth() {
        let initial = State::parse(Substrate::String, "AA").unwrap();
        let r =
            multiway_core::causal::causal_invariance_verdict(&initial, &[Rule::string("r", "A", "B")], 2, 100, true)
                .unwrap();
        let v = causal_report(&r);
        assert_eq!(v["verdict"], "invariant");
        assert_eq!(v["depth"], 2);
    }
}
