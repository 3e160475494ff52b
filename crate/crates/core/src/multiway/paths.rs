use super::MultiwayGraph;
use crate::error::Result;
use crate::rewrite::{EventId, StateKey};

/// A directed path: `states[i] --events[i]--> states[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub states: Vec<StateKey>,
    pub events: Vec<EventId>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Simple level-0 paths from `a` to `b` with at most `max_len` events,
/// in lexicographic order of their event-id sequences, at most `max_paths`.
pub fn paths_between(
    g: &MultiwayGraph,
    a: &StateKey,
    b: &StateKey,
    max_paths: usize,
    max_len: usize,
) -> Result<Vec<Path>> {
    paths_between_at_level(g, a, b, 0, max_paths, max_len)
}

/// As `paths_between`, following only edges of the given level.
pub fn paths_between_at_level(
    g: &MultiwayGraph,
    a: &StateKey,
    b: &StateKey,
    level: u32,
    max_paths: usize,
    max_len: usize,
) -> Result<Vec<Path>> {
    let start = g.index_of(a)?;
    let goal = g.index_of(b)?;
    let out = g.out_events(|l| l == level);
    let mut found = Vec::new();
    let mut on_path = vec![false; g.states.len()];
    let mut states = vec![start];
    let mut events = Vec::new();
    on_path[start] = true;
    dfs(
        g,
        &out,
        goal,
        max_paths,
        max_len,
        &mut on_path,
        &mut states,
        &mut events,
        &mut found,
    )?;
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &MultiwayGraph,
    out: &[Vec<EventId>],
    goal: usize,
    max_paths: usize,
    max_len: usize,
    on_path: &mut [bool],
    states: &mut Vec<usize>,
    events: &mut Vec<EventId>,
    found: &mut Vec<Path>,
) -> Result<()> {
    if found.len() >= max_paths {
        return Ok(());
    }
    let here = *states.last().unwrap();
    if here == goal {
        found.push(Path {
            states: states.iter().map(|&i| g.key_at(i).clone()).collect(),
            events: events.clone(),
        });
        return Ok(());
    }
    if events.len() >= max_len {
        return Ok(());
    }
    for &e in &out[here] {
        let next = g.index_of(&g.event(e).target)?;
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        states.push(next);
        events.push(e);
        dfs(g, out, goal, max_paths, max_len, on_path, states, events, found)?;
        events.pop();
        states.pop();
        on_path[next] = false;
        if found.len() >= max_paths {
            break;
        }
    }
    Ok(())
}
