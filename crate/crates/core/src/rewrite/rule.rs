use std::collections::BTreeMap;
use std::fmt;

use super::{State, StateKey, Substrate, TokenId};
use crate::error::{Error, Result};
use crate::hypergraph::HypergraphRule;
use crate::strings::StringRule;
use crate::term::{Term, TermRule};

/// Rule whose left-hand side matches only an entire state (up to the
/// substrate's equivalence) and whose right-hand side replaces it wholesale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WholeStateRule {
    pub lhs: State,
    pub rhs: State,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleBody {
    String(StringRule),
    Hypergraph(HypergraphRule),
    Term(TermRule),
    Whole(WholeStateRule),
}

/// An oriented rewrite `lhs -> rhs` tagged with its homotopy level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub level: u32,
    pub body: RuleBody,
}

impl Rule {
    pub fn new(id: impl Into<String>, body: RuleBody) -> Self {
        Rule {
            id: id.into(),
            level: 0,
            body,
        }
    }

    pub fn string(id: impl Into<String>, lhs: &str, rhs: &str) -> Self {
        Rule::new(id, RuleBody::String(StringRule::new(lhs, rhs)))
    }

    pub fn hypergraph(id: impl Into<String>, lhs: &str, rhs: &str) -> Result<Self> {
        Ok(Rule::new(id, RuleBody::Hypergraph(HypergraphRule::parse(lhs, rhs)?)))
    }

    /// A term rule; `vars` lists the identifiers treated as variables.
    pub fn term(id: impl Into<String>, lhs: &str, rhs: &str, vars: &[&str]) -> Result<Self> {
        let id = id.into();
        let body = TermRule::parse(lhs, rhs, vars)?;
        body.check_bound(&id)?;
        Ok(Rule::new(id, RuleBody::Term(body)))
    }

    pub fn whole(id: impl Into<String>, lhs: State, rhs: State) -> Result<Self> {
        if lhs.substrate() != rhs.substrate() {
            return Err(Error::SubstrateMismatch {
                expected: lhs.substrate(),
                found: rhs.substrate(),
            });
        }
        Ok(Rule::new(id, RuleBody::Whole(WholeStateRule { lhs, rhs })))
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn substrate(&self) -> Substrate {
        match &self.body {
            RuleBody::String(_) => Substrate::String,
            RuleBody::Hypergraph(_) => Substrate::Hypergraph,
            RuleBody::Term(_) => Substrate::Term,
            RuleBody::Whole(w) => w.lhs.substrate(),
        }
    }

    pub fn is_anchored(&self) -> bool {
        matches!(self.body, RuleBody::Whole(_))
    }

    /// Rewrite an anchored whole-state rule into an ordinary rule that may
    /// fire anywhere inside a state. Other rules are returned unchanged.
    pub fn unanchored(&self) -> Rule {
        let RuleBody::Whole(w) = &self.body else {
            return self.clone();
        };
        let body = match (&w.lhs, &w.rhs) {
            (State::String(l), State::String(r)) => {
                RuleBody::String(StringRule::from_symbols(l.symbols.clone(), r.symbols.clone()))
            }
            (State::Hypergraph(l), State::Hypergraph(r)) => RuleBody::Hypergraph(HypergraphRule::from_concrete(l, r)),
            (State::Term(l), State::Term(r)) => RuleBody::Term(TermRule {
                lhs: l.term.clone(),
                rhs: r.term.clone(),
            }),
            _ => unreachable!("whole-state rule sides share a substrate"),
        };
        Rule {
            id: self.id.clone(),
            level: self.level,
            body,
        }
    }

    /// The rule with its sides swapped.
    pub fn reversed(&self) -> Result<Rule> {
        let non_invertible = || Error::NonInvertibleRule(self.id.clone());
        let body = match &self.body {
            RuleBody::String(r) => {
                if r.rhs.is_empty() {
                    return Err(non_invertible());
                }
                RuleBody::String(StringRule::from_symbols(r.rhs.clone(), r.lhs.clone()))
            }
            RuleBody::Hypergraph(r) => {
                if r.rhs.edges.is_empty() {
                    return Err(non_invertible());
                }
                RuleBody::Hypergraph(HypergraphRule {
                    lhs: r.rhs.clone(),
                    rhs: r.lhs.clone(),
                    injective: r.injective,
                })
            }
            RuleBody::Term(r) => {
                if matches!(r.rhs, Term::Var(_)) || !r.lhs.vars().is_subset(&r.rhs.vars()) {
                    return Err(non_invertible());
                }
                RuleBody::Term(TermRule {
                    lhs: r.rhs.clone(),
                    rhs: r.lhs.clone(),
                })
            }
            RuleBody::Whole(w) => RuleBody::Whole(WholeStateRule {
                lhs: w.rhs.clone(),
                rhs: w.lhs.clone(),
            }),
        };
        Ok(Rule {
            id: format!("{}^-1", self.id),
            level: self.level,
            body,
        })
    }

    /// Text of the body with variables renamed by first occurrence, so that
    /// alpha-equivalent rules compare equal.
    pub fn normalized_body(&self) -> String {
        match &self.body {
            RuleBody::String(r) => r.to_string(),
            RuleBody::Hypergraph(r) => r.normalized().to_string(),
            RuleBody::Term(r) => r.normalized().to_string(),
            RuleBody::Whole(w) => format!("{} => {}", w.lhs.key(), w.rhs.key()),
        }
    }

    pub fn lhs_text(&self) -> String {
        match &self.body {
            RuleBody::String(r) => crate::strings::symbols_text(&r.lhs),
            RuleBody::Hypergraph(r) => r.lhs.to_string(),
            RuleBody::Term(r) => r.lhs.to_string(),
            RuleBody::Whole(w) => w.lhs.to_string(),
        }
    }

    pub fn rhs_text(&self) -> String {
        match &self.body {
            RuleBody::String(r) => crate::strings::symbols_text(&r.rhs),
            RuleBody::Hypergraph(r) => r.rhs.to_string(),
            RuleBody::Term(r) => r.rhs.to_string(),
            RuleBody::Whole(w) => w.rhs.to_string(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs_text(), self.rhs_text())
    }
}

/// `rules` together with the reverse of every rule, without duplicates
/// (alpha-equivalent bodies at the same level count as one rule).
pub fn add_inverses(rules: &[Rule]) -> Result<Vec<Rule>> {
    let mut out: Vec<Rule> = Vec::with_capacity(rules.len() * 2);
    let mut seen = std::collections::BTreeSet::new();
    for rule in rules {
        if seen.insert((rule.level, rule.normalized_body())) {
            out.push(rule.clone());
        }
    }
    for rule in rules {
        let rev = rule.reversed()?;
        if seen.insert((rev.level, rev.normalized_body())) {
            out.push(rev);
        }
    }
    Ok(out)
}

/// Where and how a rule's left-hand side sits inside a host state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// Start index of the matched substring.
    String { position: usize },
    /// Host edge index for each pattern edge, and the vertex binding.
    Hypergraph {
        edges: Vec<usize>,
        vars: BTreeMap<String, u32>,
    },
    /// Path of child indices to the matched subterm, and the substitution.
    Term {
        position: Vec<usize>,
        subst: BTreeMap<String, Term>,
    },
    /// The entire state.
    Whole,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::String { position } => write!(f, "@{position}"),
            Binding::Hypergraph { edges, vars } => {
                write!(f, "edges{edges:?}")?;
                for (k, v) in vars {
                    write!(f, " {k}={v}")?;
                }
                Ok(())
            }
            Binding::Term { position, subst } => {
                write!(f, "at{position:?}")?;
                for (k, v) in subst {
                    write!(f, " {k}={v}")?;
                }
                Ok(())
            }
            Binding::Whole => f.write_str("whole"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    /// Index of the rule in the slice the match was enumerated against.
    pub rule_index: usize,
    pub binding: Binding,
    /// Tokens of the host covered by the match, in host order.
    pub consumed: Vec<TokenId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(pub usize);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One application of a rule at one match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: EventId,
    pub rule_id: String,
    pub level: u32,
    pub source: StateKey,
    pub target: StateKey,
    pub consumed: Vec<TokenId>,
    pub produced: Vec<TokenId>,
    /// Tokens of the stored target representative that correspond to
    /// `produced`; differs from `produced` only when the target had already
    /// been reached through another event.
    pub produced_at_target: Vec<TokenId>,
    pub generation: u32,
    pub binding: Binding,
}

impl Event {
    pub(crate) fn new(
        rule: &Rule,
        source: StateKey,
        target: StateKey,
        consumed: Vec<TokenId>,
        produced: Vec<TokenId>,
        binding: Binding,
    ) -> Self {
        Event {
            id: EventId(0),
            rule_id: rule.id.clone(),
            level: rule.level,
            source,
            target,
            produced_at_target: produced.clone(),
            consumed,
            produced,
            generation: 0,
            binding,
        }
    }
}
