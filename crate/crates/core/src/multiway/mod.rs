//! The multiway evolution graph: breadth-first closure of a rule set from a
//! set of initial states, merging states by canonical key.

mod branchial;
mod foliation;
mod paths;
mod singleway;

pub use branchial::{branchial_graph, BranchialEdge, BranchialGraph};
pub use foliation::{foliate, Foliation};
pub use paths::{paths_between, paths_between_at_level, Path};
pub use singleway::{singleway_evolve, Strategy};

use std::collections::HashMap;

use indexmap::IndexMap;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rewrite::{successors, Event, EventId, Rule, State, StateKey, Substrate, TokenId, TokenMinter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateEntry {
    pub state: State,
    /// Breadth-first depth at which the state was first reached.
    pub generation: u32,
}

/// One evolution edge `source --event--> target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: StateKey,
    pub event: EventId,
    pub target: StateKey,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwayGraph {
    pub substrate: Substrate,
    pub rules: Vec<Rule>,
    pub initial: Vec<StateKey>,
    /// Depth the graph was evolved to.
    pub steps: usize,
    /// Canonical states in order of discovery.
    pub states: IndexMap<StateKey, StateEntry>,
    /// Events in order of discovery; `events[i].id == EventId(i)`.
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Default)]
pub struct EvolveConfig {
    pub steps: usize,
    /// Fail with `FrontierLimitExceeded` once more states than this exist.
    pub max_states: Option<usize>,
    /// Worker threads for frontier expansion; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl EvolveConfig {
    pub fn steps(steps: usize) -> Self {
        EvolveConfig {
            steps,
            ..Default::default()
        }
    }
}

impl MultiwayGraph {
    pub fn empty(substrate: Substrate) -> Self {
        MultiwayGraph {
            substrate,
            rules: Vec::new(),
            initial: Vec::new(),
            steps: 0,
            states: IndexMap::new(),
            events: Vec::new(),
        }
    }

    pub fn state(&self, key: &StateKey) -> Option<&State> {
        self.states.get(key).map(|e| &e.state)
    }

    pub fn index_of(&self, key: &StateKey) -> Result<usize> {
        self.states
            .get_index_of(key)
            .ok_or_else(|| Error::KeyNotFound(key.to_string()))
    }

    pub fn key_at(&self, index: usize) -> &StateKey {
        self.states.get_index(index).expect("state index in range").0
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.0]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.events.iter().map(|e| Edge {
            source: e.source.clone(),
            event: e.id,
            target: e.target.clone(),
            level: e.level,
        })
    }

    /// Highest rule level present among the events, if any.
    pub fn max_level(&self) -> Option<u32> {
        self.events.iter().map(|e| e.level).max()
    }

    /// For each state index, its outgoing events (ascending id) of levels
    /// accepted by `keep`.
    pub fn out_events(&self, keep: impl Fn(u32) -> bool) -> Vec<Vec<EventId>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for e in &self.events {
            if keep(e.level) {
                out[self.states.get_index_of(&e.source).expect("source stored")].push(e.id);
            }
        }
        out
    }

    /// For each state index, its incoming events of levels accepted by `keep`.
    pub fn in_events(&self, keep: impl Fn(u32) -> bool) -> Vec<Vec<EventId>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for e in &self.events {
            if keep(e.level) {
                out[self.states.get_index_of(&e.target).expect("target stored")].push(e.id);
            }
        }
        out
    }

    /// Number of states first reached at each generation.
    pub fn generation_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for e in self.states.values() {
            let g = e.generation as usize;
            if counts.len() <= g {
                counts.resize(g + 1, 0);
            }
            counts[g] += 1;
        }
        counts
    }

    /// The subgraph on `keys` (kept in this graph's order) with the events
    /// between them, renumbered densely in their original order.
    pub fn restrict(&self, keys: &[StateKey]) -> MultiwayGraph {
        let keep: std::collections::HashSet<&StateKey> = keys.iter().collect();
        let mut sub = MultiwayGraph::empty(self.substrate);
        sub.rules = self.rules.clone();
        sub.steps = self.steps;
        sub.initial = self.initial.iter().filter(|k| keep.contains(k)).cloned().collect();
        sub.states = self
            .states
            .iter()
            .filter(|(k, _)| keep.contains(k))
            .map(|(k, e)| (k.clone(), e.clone()))
            .collect();
        for e in &self.events {
            if keep.contains(&e.source) && keep.contains(&e.target) {
                let mut e = e.clone();
                e.id = EventId(sub.events.len());
                sub.events.push(e);
            }
        }
        sub
    }

    pub fn states_at_generation(&self, generation: u32) -> Vec<&StateKey> {
        self.states
            .iter()
            .filter(|(_, e)| e.generation == generation)
            .map(|(k, _)| k)
            .collect()
    }
}

pub fn evolve(initial: &[State], rules: &[Rule], steps: usize) -> Result<MultiwayGraph> {
    evolve_with(initial, rules, &EvolveConfig::steps(steps))
}

/// Breadth-first closure to depth `config.steps`. Each state is expanded
/// once, at the generation it was first reached. Fresh tokens are renumbered
/// from a single counter in discovery order, so the graph does not depend on
/// how expansion was scheduled.
pub fn evolve_with(initial: &[State], rules: &[Rule], config: &EvolveConfig) -> Result<MultiwayGraph> {
    let substrate = match initial.first() {
        Some(s) => s.substrate(),
        None => rules.first().map(Rule::substrate).unwrap_or(Substrate::String),
    };
    for s in initial {
        if s.substrate() != substrate {
            return Err(Error::SubstrateMismatch {
                expected: substrate,
                found: s.substrate(),
            });
        }
    }
    for r in rules {
        if r.substrate() != substrate {
            return Err(Error::SubstrateMismatch {
                expected: substrate,
                found: r.substrate(),
            });
        }
    }
    let pool = match config.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool"),
        ),
        None => None,
    };

    let mut g = MultiwayGraph::empty(substrate);
    g.rules = rules.to_vec();
    g.steps = config.steps;
    let mut minter = TokenMinter::starting_at(0);
    let mut frontier = Vec::new();
    for s in initial {
        let canonical = s.canonical().retokenized(&mut minter);
        let key = canonical.key();
        if !g.initial.contains(&key) {
            g.initial.push(key.clone());
        }
        if !g.states.contains_key(&key) {
            frontier.push(g.states.len());
            g.states.insert(
                key,
                StateEntry {
                    state: canonical,
                    generation: 0,
                },
            );
        }
    }
    check_cap(&g, config)?;

    for step in 0..config.steps {
        if frontier.is_empty() {
            break;
        }
        let expand = |i: &usize| successors(&g.states[*i].state, rules);
        let expanded: Vec<Result<Vec<(Event, State)>>> = match &pool {
            Some(p) => p.install(|| frontier.par_iter().map(expand).collect()),
            None => frontier.par_iter().map(expand).collect(),
        };
        let mut next = Vec::new();
        for succ in expanded {
            for (mut event, target) in succ? {
                let renumber: HashMap<TokenId, TokenId> = event.produced.iter().map(|t| (*t, minter.mint())).collect();
                event.produced = event.produced.iter().map(|t| renumber[t]).collect();
                event.id = EventId(g.events.len());
                event.generation = step as u32 + 1;
                match g.states.get(&event.target) {
                    Some(existing) => {
                        event.produced_at_target = target
                            .tokens()
                            .iter()
                            .zip(existing.state.tokens())
                            .filter(|(t, _)| renumber.contains_key(t))
                            .map(|(_, stored)| *stored)
                            .collect();
                    }
                    None => {
                        let tokens = target
                            .tokens()
                            .iter()
                            .map(|t| renumber.get(t).copied().unwrap_or(*t))
                            .collect();
                        event.produced_at_target = event.produced.clone();
                        next.push(g.states.len());
                        g.states.insert(
                            event.target.clone(),
                            StateEntry {
                                state: target.with_tokens(tokens),
                                generation: step as u32 + 1,
                            },
                        );
                        check_cap(&g, config)?;
                    }
                }
                g.events.push(event);
            }
        }
        frontier = next;
    }
    Ok(g)
}

fn check_cap(g: &MultiwayGraph, config: &EvolveConfig) -> Result<()> {
    match config.max_states {
        Some(cap) if g.states.len() > cap => Err(Error::FrontierLimitExceeded(cap)),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests;
