use std::collections::BTreeSet;

use super::{Foliation, MultiwayGraph};
use crate::error::{Error, Result};
use crate::rewrite::StateKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchialEdge {
    /// Indices into `BranchialGraph::vertices`, `a < b`.
    pub a: usize,
    pub b: usize,
    /// Number of shared ancestors.
    pub weight: usize,
}

/// Undirected graph on one slice linking states with a common ancestor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchialGraph {
    pub slice: usize,
    pub ancestor_depth: usize,
    pub vertices: Vec<StateKey>,
    pub edges: Vec<BranchialEdge>,
}

/// States reachable backwards from `start` in 1..=depth level-0 steps.
fn ancestors(preds: &[Vec<usize>], start: usize, depth: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut layer = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &v in &layer {
            for &p in &preds[v] {
                if p != start && seen.insert(p) {
                    next.push(p);
                }
            }
        }
        layer = next;
    }
    seen
}

pub fn branchial_graph(
    g: &MultiwayGraph,
    foliation: &Foliation,
    slice_index: usize,
    ancestor_depth: usize,
) -> Result<BranchialGraph> {
    let slice = foliation
        .slices
        .get(slice_index)
        .ok_or_else(|| Error::KeyNotFound(format!("slice {slice_index}")))?;
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); g.states.len()];
    for e in g.events.iter().filter(|e| e.level == 0) {
        let (s, t) = (g.index_of(&e.source)?, g.index_of(&e.target)?);
        if !preds[t].contains(&s) {
            preds[t].push(s);
        }
    }
    let anc: Vec<BTreeSet<usize>> = slice
        .iter()
        .map(|k| Ok(ancestors(&preds, g.index_of(k)?, ancestor_depth)))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for a in 0..slice.len() {
        for b in a + 1..slice.len() {
            let weight = anc[a].intersection(&anc[b]).count();
            if weight > 0 {
                edges.push(BranchialEdge { a, b, weight });
            }
        }
    }
    Ok(BranchialGraph {
        slice: slice_index,
        ancestor_depth,
        vertices: slice.clone(),
        edges,
    })
}
