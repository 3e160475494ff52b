use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rewrite::{
    apply_match, enumerate_matches, Binding, Event, EventId, Match, Rule, State, TokenId, TokenMinter,
};

/// Updating order for a single evolution history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// The first match in (rule, match) order, one event per step.
    FirstMatch,
    /// A maximal set of token-disjoint matches per step, chosen greedily
    /// from a seeded shuffle, applied together.
    AllNonOverlapping(u64),
}

/// Host tokens in the order the rule's left-hand side covers them; this
/// identifies a match independently of positions.
pub(crate) fn match_signature(state: &State, m: &Match) -> Vec<TokenId> {
    match (&m.binding, state) {
        (Binding::Hypergraph { edges, .. }, State::Hypergraph(h)) => edges.iter().map(|&i| h.tokens[i]).collect(),
        _ => m.consumed.clone(),
    }
}

/// Re-find a match of `rules[rule_index]` covering the same tokens after
/// other, disjoint rewrites have moved it.
pub(crate) fn relocate(state: &State, rules: &[Rule], rule_index: usize, signature: &[TokenId]) -> Result<Match> {
    enumerate_matches(state, std::slice::from_ref(&rules[rule_index]))?
        .into_iter()
        .find(|m| match_signature(state, m) == signature)
        .map(|mut m| {
            m.rule_index = rule_index;
            m
        })
        .ok_or(Error::StaleMatch)
}

/// One evolution history. The first entry is the initial state with no
/// events; each later entry is the state after one step together with the
/// events of that step. Stops early when no rule matches.
pub fn singleway_evolve(
    initial: &State,
    rules: &[Rule],
    steps: usize,
    strategy: Strategy,
) -> Result<Vec<(State, Vec<Event>)>> {
    let mut rng = match strategy {
        Strategy::AllNonOverlapping(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::FirstMatch => None,
    };
    let mut minter = TokenMinter::after(initial);
    let mut state = initial.clone();
    let mut history = vec![(state.clone(), Vec::new())];
    let mut next_event = 0;
    for step in 1..=steps {
        let matches = enumerate_matches(&state, rules)?;
        if matches.is_empty() {
            break;
        }
        let chosen: Vec<&Match> = match rng.as_mut() {
            None => vec![&matches[0]],
            Some(rng) => {
                let mut order: Vec<usize> = (0..matches.len()).collect();
                order.shuffle(rng);
                let mut used = std::collections::HashSet::new();
                let mut picked = Vec::new();
                for i in order {
                    if matches[i].consumed.iter().all(|t| !used.contains(t)) {
                        used.extend(matches[i].consumed.iter().copied());
                        picked.push(i);
                    }
                }
                picked.sort_unstable();
                picked.into_iter().map(|i| &matches[i]).collect()
            }
        };
        let signatures: Vec<(usize, Vec<TokenId>)> = chosen
            .iter()
            .map(|m| (m.rule_index, match_signature(&state, m)))
            .collect();
        let source = state.key();
        let mut events = Vec::new();
        for (rule_index, sig) in signatures {
            let m = relocate(&state, rules, rule_index, &sig)?;
            let (next, mut event) = apply_match(&state, rules, &m, &mut minter)?;
            event.id = EventId(next_event);
            event.generation = step as u32;
            next_event += 1;
            state = next;
            events.push(event);
        }
        let target = state.key();
        for e in &mut events {
            e.source = source.clone();
            e.target = target.clone();
        }
        history.push((state.clone(), events));
    }
    Ok(history)
}
