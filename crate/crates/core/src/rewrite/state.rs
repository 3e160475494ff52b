use std::fmt;
use std::sync::Arc;

use super::{TokenId, TokenMinter};
use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::strings::StringState;
use crate::syntax;
use crate::term::TermState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Substrate {
    String,
    Hypergraph,
    Term,
}

impl Substrate {
    pub fn name(self) -> &'static str {
        match self {
            Substrate::String => "string",
            Substrate::Hypergraph => "hypergraph",
            Substrate::Term => "term",
        }
    }
}

impl fmt::Display for Substrate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Substrate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "string" => Ok(Substrate::String),
            "hypergraph" => Ok(Substrate::Hypergraph),
            "term" => Ok(Substrate::Term),
            other => Err(format!("unknown substrate `{other}`")),
        }
    }
}

/// Canonical identity of a state: equal keys iff the states are equivalent
/// under their substrate's equivalence. Keys are printable canonical text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Arc<str>);

impl StateKey {
    pub fn new(text: impl AsRef<str>) -> Self {
        StateKey(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateKey {
    fn from(s: &str) -> Self {
        StateKey::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum State {
    String(StringState),
    Hypergraph(Hypergraph),
    Term(TermState),
}

impl State {
    /// Parse the external text form of a state of the given substrate.
    pub fn parse(substrate: Substrate, text: &str) -> Result<State> {
        Ok(match substrate {
            Substrate::String => State::String(syntax::parse_string_state(text)?),
            Substrate::Hypergraph => State::Hypergraph(syntax::parse_hypergraph(text)?),
            Substrate::Term => State::Term(TermState::new(syntax::parse_term(text, &Default::default())?)),
        })
    }

    pub fn substrate(&self) -> Substrate {
        match self {
            State::String(_) => Substrate::String,
            State::Hypergraph(_) => Substrate::Hypergraph,
            State::Term(_) => Substrate::Term,
        }
    }

    pub fn tokens(&self) -> &[TokenId] {
        match self {
            State::String(s) => &s.tokens,
            State::Hypergraph(h) => &h.tokens,
            State::Term(t) => &t.tokens,
        }
    }

    pub fn key(&self) -> StateKey {
        match self {
            State::Hypergraph(h) => StateKey::new(h.canonical_text()),
            other => StateKey::new(other.to_string()),
        }
    }

    /// The canonical representative of this state's equivalence class,
    /// carrying the same tokens (permuted along with the constituents).
    pub fn canonical(&self) -> State {
        match self {
            State::Hypergraph(h) => State::Hypergraph(h.canonical()),
            other => other.clone(),
        }
    }

    /// Same payload, every constituent given a fresh token.
    pub fn retokenized(&self, minter: &mut TokenMinter) -> State {
        let mut out = self.clone();
        let tokens = match &mut out {
            State::String(s) => &mut s.tokens,
            State::Hypergraph(h) => &mut h.tokens,
            State::Term(t) => &mut t.tokens,
        };
        for t in tokens.iter_mut() {
            *t = minter.mint();
        }
        out
    }

    /// Replace tokens positionally.
    pub fn with_tokens(&self, tokens: Vec<TokenId>) -> State {
        let mut out = self.clone();
        match &mut out {
            State::String(s) => s.tokens = tokens,
            State::Hypergraph(h) => h.tokens = tokens,
            State::Term(t) => t.tokens = tokens,
        }
        assert_eq!(out.tokens().len(), self.tokens().len());
        out
    }

    /// Payload equality, ignoring tokens.
    pub fn same_payload(&self, other: &State) -> bool {
        match (self, other) {
            (State::String(a), State::String(b)) => a.symbols == b.symbols,
            (State::Hypergraph(a), State::Hypergraph(b)) => a.edges == b.edges,
            (State::Term(a), State::Term(b)) => a.term == b.term,
            _ => false,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::String(s) => write!(f, "{s}"),
            State::Hypergraph(h) => write!(f, "{h}"),
            State::Term(t) => write!(f, "{}", t.term),
        }
    }
}
