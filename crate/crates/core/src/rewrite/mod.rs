//! Substrate-agnostic rewriting contracts: states, rules, matches, events and
//! the successor function that every substrate implements.
//!
//! A rewriting system here is a map from a state to the set of
//! `(event, successor)` pairs obtained by applying every rule at every match.

mod rule;
mod state;

pub use rule::{add_inverses, Binding, Event, EventId, Match, Rule, RuleBody, WholeStateRule};
pub use state::{State, StateKey, Substrate};

use crate::error::{Error, Result};
use crate::{hypergraph, strings, term};

/// Identity of one atomic constituent (character, hyperedge or term node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenId(pub u64);

impl std::fmt::Display for TokenId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Monotone source of fresh token ids.
#[derive(Debug, Clone)]
pub struct TokenMinter {
    next: u64,
}

impl TokenMinter {
    pub fn starting_at(next: u64) -> Self {
        TokenMinter { next }
    }

    /// A minter whose ids are all larger than any token of `state`.
    pub fn after(state: &State) -> Self {
        Self::starting_at(state.tokens().iter().map(|t| t.0 + 1).max().unwrap_or(0))
    }

    pub fn mint(&mut self) -> TokenId {
        let id = TokenId(self.next);
        self.next += 1;
        id
    }

    pub fn mint_n(&mut self, n: usize) -> Vec<TokenId> {
        (0..n).map(|_| self.mint()).collect()
    }

    pub fn peek(&self) -> u64 {
        self.next
    }
}

fn check_substrate(state: &State, rules: &[Rule]) -> Result<()> {
    for rule in rules {
        if rule.substrate() != state.substrate() {
            return Err(Error::SubstrateMismatch {
                expected: state.substrate(),
                found: rule.substrate(),
            });
        }
    }
    Ok(())
}

/// Every match of every rule in `state`, ordered by rule index and then by
/// the substrate's match order.
pub fn enumerate_matches(state: &State, rules: &[Rule]) -> Result<Vec<Match>> {
    check_substrate(state, rules)?;
    let mut out = Vec::new();
    for (index, rule) in rules.iter().enumerate() {
        match (&rule.body, state) {
            (RuleBody::Whole(whole), _) => {
                if whole.lhs.key() == state.key() {
                    out.push(Match {
                        rule_index: index,
                        binding: Binding::Whole,
                        consumed: state.tokens().to_vec(),
                    });
                }
            }
            (RuleBody::String(_), State::String(s)) => out.extend(strings::enumerate_matches(s, rule, index)?),
            (RuleBody::Hypergraph(_), State::Hypergraph(h)) => {
                out.extend(hypergraph::enumerate_matches(h, rule, index)?)
            }
            (RuleBody::Term(_), State::Term(t)) => out.extend(term::enumerate_matches(t, rule, index)?),
            _ => unreachable!("substrates checked above"),
        }
    }
    Ok(out)
}

/// Apply `m` (a match of `rules[m.rule_index]`) to `state`, minting fresh
/// tokens from `minter`. The result is not canonicalized.
pub fn apply_match(state: &State, rules: &[Rule], m: &Match, minter: &mut TokenMinter) -> Result<(State, Event)> {
    let rule = rules.get(m.rule_index).ok_or(Error::StaleMatch)?;
    check_substrate(state, std::slice::from_ref(rule))?;
    match (&rule.body, state) {
        (RuleBody::Whole(whole), _) => {
            if m.consumed != state.tokens() || whole.lhs.key() != state.key() {
                return Err(Error::StaleMatch);
            }
            let result = whole.rhs.retokenized(minter);
            let event = Event::new(
                rule,
                state.key(),
                result.key(),
                m.consumed.clone(),
                result.tokens().to_vec(),
                Binding::Whole,
            );
            Ok((result, event))
        }
        (RuleBody::String(_), State::String(s)) => {
            let (r, e) = strings::apply_match(s, rule, m, minter)?;
            Ok((State::String(r), e))
        }
        (RuleBody::Hypergraph(_), State::Hypergraph(h)) => {
            let (r, e) = hypergraph::apply_match(h, rule, m, minter)?;
            Ok((State::Hypergraph(r), e))
        }
        (RuleBody::Term(_), State::Term(t)) => {
            let (r, e) = term::apply_match(t, rule, m, minter)?;
            Ok((State::Term(r), e))
        }
        _ => unreachable!("substrates checked above"),
    }
}

/// All one-step successors of `state`: one `(event, canonical state)` pair
/// per match. Fresh tokens for each successor start right after the largest
/// token of `state`, so the output depends only on the inputs.
pub fn successors(state: &State, rules: &[Rule]) -> Result<Vec<(Event, State)>> {
    let matches = enumerate_matches(state, rules)?;
    let mut out = Vec::with_capacity(matches.len());
    for (i, m) in matches.iter().enumerate() {
        let mut minter = TokenMinter::after(state);
        let (result, mut event) = apply_match(state, rules, m, &mut minter)?;
        let canonical = result.canonical();
        event.id = EventId(i);
        event.target = canonical.key();
        event.produced_at_target = event.produced.clone();
        out.push((event, canonical));
    }
    Ok(out)
}
