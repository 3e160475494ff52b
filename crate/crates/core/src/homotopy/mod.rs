//! Homotopies between evolution paths: synthesis of whole-state rules that
//! pair up corresponding states of two proofs, re-evolution under the
//! resulting rule tower, and detection of the squares and cubes it creates.

mod cells;
mod closure;

pub use cells::{find_cubes, find_cubes_with, find_squares, find_squares_with, CellMode, Cube, Side, Square, Witness};
pub use closure::{check_composition_closure, paste_vertical, ClosureReport, PastedCell};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::multiway::{evolve_with, EvolveConfig, MultiwayGraph, Path};
use crate::rewrite::{Rule, State};

/// Rule sets `R0, R1, ...`; every rule in `levels[k]` has level `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleTower {
    levels: Vec<Vec<Rule>>,
}

impl RuleTower {
    pub fn new(base: Vec<Rule>) -> Self {
        let mut t = RuleTower::default();
        t.extend(base.into_iter().map(|r| r.with_level(0)));
        t
    }

    /// Group rules by their level tags.
    pub fn from_rules(rules: impl IntoIterator<Item = Rule>) -> Self {
        let mut t = RuleTower::default();
        t.extend(rules);
        t
    }

    pub fn extend(&mut self, rules: impl IntoIterator<Item = Rule>) {
        for r in rules {
            let k = r.level as usize;
            if self.levels.len() <= k {
                self.levels.resize(k + 1, Vec::new());
            }
            self.levels[k].push(r);
        }
    }

    /// Highest level with rules; 0 for a base-only tower.
    pub fn height(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    pub fn level(&self, k: usize) -> &[Rule] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    /// All rules of level at most `k`, lowest level first.
    pub fn up_to(&self, k: usize) -> Vec<Rule> {
        self.levels.iter().take(k + 1).flatten().cloned().collect()
    }

    pub fn all(&self) -> Vec<Rule> {
        self.levels.iter().flatten().cloned().collect()
    }
}

/// The states along a path of `g`.
pub fn path_states(g: &MultiwayGraph, path: &Path) -> Result<Vec<State>> {
    path.states
        .iter()
        .map(|k| g.state(k).cloned().ok_or_else(|| Error::KeyNotFound(k.to_string())))
        .collect()
}

/// One whole-state rule `p1[i] -> p2[i]` at `level` for every interior
/// index where the two paths differ.
pub fn synthesize_homotopy_rules(p1: &[State], p2: &[State], level: u32) -> Result<Vec<Rule>> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch(p1.len(), p2.len()));
    }
    let ends_agree = |a: Option<&State>, b: Option<&State>| match (a, b) {
        (Some(x), Some(y)) => x.key() == y.key(),
        _ => true,
    };
    if !ends_agree(p1.first(), p2.first()) || !ends_agree(p1.last(), p2.last()) {
        return Err(Error::EndpointMismatch);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 1..p1.len().saturating_sub(1) {
        let (a, b) = (&p1[i], &p2[i]);
        if a.key() != b.key() && seen.insert((a.key(), b.key())) {
            let id = format!("h{level}.{}", out.len() + 1);
            out.push(Rule::whole(id, a.canonical(), b.canonical())?.with_level(level));
        }
    }
    Ok(out)
}

/// Re-evolve `g`'s initial states for `steps` under its rules plus
/// `new_rules`. New rules fire wherever they match, not only on the paths
/// they were synthesized from.
pub fn induce(g: &MultiwayGraph, new_rules: &[Rule], steps: usize) -> Result<MultiwayGraph> {
    induce_with(g, new_rules, &EvolveConfig::steps(steps))
}

pub fn induce_with(g: &MultiwayGraph, new_rules: &[Rule], config: &EvolveConfig) -> Result<MultiwayGraph> {
    let initial: Vec<State> = g
        .initial
        .iter()
        .map(|k| g.state(k).cloned().ok_or_else(|| Error::KeyNotFound(k.to_string())))
        .collect::<Result<_>>()?;
    let mut rules = g.rules.clone();
    rules.extend(new_rules.iter().cloned());
    evolve_with(&initial, &rules, config)
}

#[cfg(test)]
mod tests;
