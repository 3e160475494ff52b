//! String substrate. A match is a tri-partition `s = a · b · c` with `b`
//! equal to the rule's left-hand side; every start position yields its own
//! match, overlapping or not.

use std::fmt;

use crate::error::{Error, Result};
use crate::rewrite::{Binding, Event, Match, Rule, RuleBody, StateKey, TokenId, TokenMinter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringState {
    pub symbols: Vec<char>,
    pub tokens: Vec<TokenId>,
}

impl StringState {
    /// A fresh string whose tokens are `0..len`.
    pub fn new(text: &str) -> Self {
        let symbols: Vec<char> = text.chars().collect();
        let tokens = (0..symbols.len() as u64).map(TokenId).collect();
        StringState { symbols, tokens }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_string(&self) -> String {
        self.symbols.iter().collect()
    }
}

pub(crate) fn symbols_text(symbols: &[char]) -> String {
    if symbols.is_empty() {
        "\"\"".to_string()
    } else {
        symbols.iter().collect()
    }
}

impl fmt::Display for StringState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&symbols_text(&self.symbols))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringRule {
    pub lhs: Vec<char>,
    pub rhs: Vec<char>,
}

impl StringRule {
    pub fn new(lhs: &str, rhs: &str) -> Self {
        StringRule::from_symbols(lhs.chars().collect(), rhs.chars().collect())
    }

    pub fn from_symbols(lhs: Vec<char>, rhs: Vec<char>) -> Self {
        StringRule { lhs, rhs }
    }
}

impl fmt::Display for StringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", symbols_text(&self.lhs), symbols_text(&self.rhs))
    }
}

fn string_rule(rule: &Rule) -> Result<&StringRule> {
    match &rule.body {
        RuleBody::String(r) => Ok(r),
        _ => Err(Error::SubstrateMismatch {
            expected: crate::rewrite::Substrate::String,
            found: rule.substrate(),
        }),
    }
}

/// Start positions `p` with `symbols[p..p + |lhs|] == lhs`, increasing.
pub fn match_positions(symbols: &[char], lhs: &[char]) -> Vec<usize> {
    if lhs.is_empty() || lhs.len() > symbols.len() {
        return Vec::new();
    }
    symbols
        .windows(lhs.len())
        .enumerate()
        .filter(|(_, w)| *w == lhs)
        .map(|(p, _)| p)
        .collect()
}

pub fn enumerate_matches(s: &StringState, rule: &Rule, rule_index: usize) -> Result<Vec<Match>> {
    let r = string_rule(rule)?;
    if r.lhs.is_empty() {
        return Err(Error::EmptyLhs(rule.id.clone()));
    }
    Ok(match_positions(&s.symbols, &r.lhs)
        .into_iter()
        .map(|p| Match {
            rule_index,
            binding: Binding::String { position: p },
            consumed: s.tokens[p..p + r.lhs.len()].to_vec(),
        })
        .collect())
}

/// Replace the matched infix by the rule's right-hand side, minting a fresh
/// token for every inserted symbol.
pub fn apply_match(s: &StringState, rule: &Rule, m: &Match, minter: &mut TokenMinter) -> Result<(StringState, Event)> {
    let r = string_rule(rule)?;
    let Binding::String { position: p } = m.binding else {
        return Err(Error::StaleMatch);
    };
    let end = p + r.lhs.len();
    if r.lhs.is_empty() || end > s.len() || s.symbols[p..end] != r.lhs[..] || s.tokens[p..end] != m.consumed[..] {
        return Err(Error::StaleMatch);
    }
    let produced = minter.mint_n(r.rhs.len());
    let mut symbols = Vec::with_capacity(s.len() - r.lhs.len() + r.rhs.len());
    symbols.extend_from_slice(&s.symbols[..p]);
    symbols.extend_from_slice(&r.rhs);
    symbols.extend_from_slice(&s.symbols[end..]);
    let mut tokens = Vec::with_capacity(symbols.len());
    tokens.extend_from_slice(&s.tokens[..p]);
    tokens.extend_from_slice(&produced);
    tokens.extend_from_slice(&s.tokens[end..]);
    let result = StringState { symbols, tokens };
    let event = Event::new(
        rule,
        StateKey::new(s.to_string()),
        StateKey::new(result.to_string()),
        m.consumed.clone(),
        produced,
        m.binding.clone(),
    );
    Ok((result, event))
}
