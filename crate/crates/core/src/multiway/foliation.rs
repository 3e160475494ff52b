use std::collections::VecDeque;

use indexmap::IndexMap;

use super::MultiwayGraph;
use crate::error::{Error, Result};
use crate::rewrite::StateKey;

/// A time function on states and its level sets. Only level-0 (evolution)
/// events constrain time; higher-level edges connect states within or
/// across slices freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Foliation {
    pub time: IndexMap<StateKey, usize>,
    /// `slices[t]` lists the states with time `t`, in discovery order.
    pub slices: Vec<Vec<StateKey>>,
}

impl Foliation {
    /// Wrap a user-supplied time function; every state of `g` must be timed.
    pub fn from_time_function(g: &MultiwayGraph, time: &IndexMap<StateKey, usize>) -> Result<Self> {
        let mut out = IndexMap::new();
        for key in g.states.keys() {
            let t = time.get(key).ok_or_else(|| Error::KeyNotFound(key.to_string()))?;
            out.insert(key.clone(), *t);
        }
        Ok(Self::from_map(out))
    }

    fn from_map(time: IndexMap<StateKey, usize>) -> Self {
        let n = time.values().max().map_or(0, |m| m + 1);
        let mut slices = vec![Vec::new(); n];
        for (k, &t) in &time {
            slices[t].push(k.clone());
        }
        Foliation { time, slices }
    }

    /// Every level-0 event goes strictly forward in time.
    pub fn is_valid_for(&self, g: &MultiwayGraph) -> bool {
        g.states.keys().all(|k| self.time.contains_key(k))
            && g.events
                .iter()
                .filter(|e| e.level == 0)
                .all(|e| self.time[&e.source] < self.time[&e.target])
    }

    pub fn time_of(&self, key: &StateKey) -> Option<usize> {
        self.time.get(key).copied()
    }
}

/// Generational foliation: time is the longest level-0 path length reaching
/// each state.
pub fn foliate(g: &MultiwayGraph) -> Result<Foliation> {
    let n = g.states.len();
    let out = g.out_events(|l| l == 0);
    let mut indegree = vec![0usize; n];
    for es in &out {
        for e in es {
            indegree[g.index_of(&g.event(*e).target)?] += 1;
        }
    }
    let mut time = vec![0usize; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut done = 0;
    while let Some(i) = queue.pop_front() {
        done += 1;
        for e in &out[i] {
            let j = g.index_of(&g.event(*e).target)?;
            time[j] = time[j].max(time[i] + 1);
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    if done < n {
        return Err(Error::CyclicGraph);
    }
    Ok(Foliation::from_map(g.states.keys().cloned().zip(time).collect()))
}
