//! DOT rendering. Evolution edges are gray, level-1 homotopy edges purple,
//! level-2 orange, causal edges orange; nodes are listed in graph order.

use std::fmt::Write as _;

use multiway_core::causal::{CausalNetwork, MultiwayCausalGraph, OverlayNode};
use multiway_core::hypergraph::Hypergraph;
use multiway_core::multiway::{BranchialGraph, MultiwayGraph};

pub const EVOLUTION: &str = "gray50";
pub const CAUSAL: &str = "darkorange";

pub fn level_color(level: u32) -> &'static str {
    match level {
        0 => EVOLUTION,
        1 => "purple",
        2 => "orange",
        _ => "forestgreen",
    }
}

pub fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn header(kind: &str, name: &str) -> String {
    format!("{kind} {name} {{\n  graph [rankdir=TB];\n  node [shape=box, fontname=\"Helvetica\"];\n")
}

pub fn graph_dot(g: &MultiwayGraph) -> String {
    let mut out = header("digraph", "multiway");
    for (i, k) in g.states.keys().enumerate() {
        let _ = writeln!(out, "  s{i} [label={}];", quote(k.as_str()));
    }
    for e in &g.events {
        let s = g.states.get_index_of(&e.source).expect("stored");
        let t = g.states.get_index_of(&e.target).expect("stored");
        let _ = writeln!(
            out,
            "  s{s} -> s{t} [color={}, tooltip={}];",
            level_color(e.level),
            quote(&e.rule_id)
        );
    }
    out.push_str("}\n");
    out
}

/// States as boxes, events as small ellipses, evolution edges through the
/// events and causal edges between them.
pub fn overlay_dot(g: &MultiwayGraph, overlay: &MultiwayCausalGraph) -> String {
    let mut out = header("digraph", "causal_overlay");
    for (i, k) in overlay.states.iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label={}];", quote(k.as_str()));
    }
    for id in &overlay.events {
        let e = g.event(*id);
        let _ = writeln!(
            out,
            "  {id} [shape=ellipse, style=filled, fillcolor=lightyellow, label={}];",
            quote(&e.rule_id)
        );
    }
    let name = |n: &OverlayNode| match n {
        OverlayNode::State(k) => format!("s{}", g.states.get_index_of(k).expect("stored")),
        OverlayNode::Event(e) => e.to_string(),
    };
    for (a, b) in &overlay.evolution {
        let _ = writeln!(out, "  {} -> {} [color={EVOLUTION}];", name(a), name(b));
    }
    for c in &overlay.causal {
        let _ = writeln!(out, "  {} -> {} [color={CAUSAL}];", c.from, c.to);
    }
    out.push_str("}\n");
    out
}

pub fn causal_dot(net: &CausalNetwork) -> String {
    let mut out = header("digraph", "causal");
    for (id, rule) in net.events.iter().zip(&net.rule_ids) {
        let _ = writeln!(out, "  {id} [shape=ellipse, label={}];", quote(rule));
    }
    for c in &net.edges {
        let _ = writeln!(out, "  {} -> {} [color={CAUSAL}];", c.from, c.to);
    }
    out.push_str("}\n");
    out
}

/// One cluster per slice.
pub fn branchial_dot(slices: &[BranchialGraph]) -> String {
    let mut out = header("graph", "branchial");
    for b in slices {
        let _ = writeln!(
            out,
            "  subgraph cluster_{} {{\n    label={};",
            b.slice,
            quote(&format!("slice {}", b.slice))
        );
        for (i, k) in b.vertices.iter().enumerate() {
            let _ = writeln!(out, "    t{}_{i} [label={}];", b.slice, quote(k.as_str()));
        }
        for e in &b.edges {
            let _ = writeln!(
                out,
                "    t{0}_{1} -- t{0}_{2} [label={3}];",
                b.slice, e.a, e.b, e.weight
            );
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Binary and unary hyperedges as arrows; longer edges as chains.
pub fn hypergraph_dot(h: &Hypergraph) -> String {
    let mut out = header("digraph", "hypergraph");
    out.push_str("  node [shape=circle];\n");
    for v in h.vertices_in_order() {
        let _ = writeln!(out, "  v{v} [label=\"{v}\"];");
    }
    for (i, e) in h.edges.iter().enumerate() {
        match e.as_slice() {
            [v] => {
                let _ = writeln!(out, "  v{v} -> v{v} [label=\"{i}\"];");
            }
            _ => {
                for w in e.windows(2) {
                    let _ = writeln!(out, "  v{} -> v{} [label=\"{i}\"];", w[0], w[1]);
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
