//! Reduction orderings on terms: the lexicographic path ordering and a
//! size-then-lexicographic ordering on flattened terms.

use std::cmp::Ordering;

use super::Term;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Lpo,
    Shortlex,
}

/// Ordering kind plus a symbol precedence. Listed symbols rank above
/// unlisted ones; unlisted symbols compare by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrdering {
    pub kind: OrderKind,
    /// Symbols from greatest to least.
    pub precedence: Vec<String>,
}

impl TermOrdering {
    pub fn new(kind: OrderKind, greatest_first: &[&str]) -> Self {
        TermOrdering {
            kind,
            precedence: greatest_first.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn lpo(greatest_first: &[&str]) -> Self {
        Self::new(OrderKind::Lpo, greatest_first)
    }

    pub fn shortlex(greatest_first: &[&str]) -> Self {
        Self::new(OrderKind::Shortlex, greatest_first)
    }

    pub fn symbol_cmp(&self, f: &str, g: &str) -> Ordering {
        let rank = |s: &str| match self.precedence.iter().position(|p| p == s) {
            Some(i) => (1, self.precedence.len() - i),
            None => (0, 0),
        };
        rank(f).cmp(&rank(g)).then_with(|| f.cmp(g))
    }

    /// `Less`, `Equal` or `Greater`; `Incomparable` when neither side
    /// dominates (possible only for terms with variables).
    pub fn compare(&self, s: &Term, t: &Term) -> Result<Ordering> {
        if s == t {
            return Ok(Ordering::Equal);
        }
        if self.greater(s, t) {
            Ok(Ordering::Greater)
        } else if self.greater(t, s) {
            Ok(Ordering::Less)
        } else {
            Err(Error::Incomparable)
        }
    }

    /// Strict `s > t`.
    pub fn greater(&self, s: &Term, t: &Term) -> bool {
        match self.kind {
            OrderKind::Lpo => self.lpo_gt(s, t),
            OrderKind::Shortlex => self.shortlex_gt(s, t),
        }
    }

    fn lpo_gt(&self, s: &Term, t: &Term) -> bool {
        let Term::App(f, ss) = s else { return false };
        if let Term::Var(x) = t {
            return s.vars().contains(x);
        }
        if ss.iter().any(|si| si == t || self.lpo_gt(si, t)) {
            return true;
        }
        let Term::App(g, ts) = t else { unreachable!() };
        if !ts.iter().all(|tj| self.lpo_gt(s, tj)) {
            return false;
        }
        match self.symbol_cmp(f, g) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                for (a, b) in ss.iter().zip(ts) {
                    if a != b {
                        return self.lpo_gt(a, b);
                    }
                }
                ss.len() > ts.len()
            }
        }
    }

    fn shortlex_gt(&self, s: &Term, t: &Term) -> bool {
        let (cs, ct) = (s.var_counts(), t.var_counts());
        if !ct.iter().all(|(v, n)| cs.get(v).copied().unwrap_or(0) >= *n) {
            return false;
        }
        match s.size().cmp(&t.size()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let (fs, ft) = (flatten(s), flatten(t));
                for (a, b) in fs.iter().zip(&ft) {
                    match (a, b) {
                        (Term::App(f, _), Term::App(g, _)) => match self.symbol_cmp(f, g) {
                            Ordering::Equal => {}
                            o => return o == Ordering::Greater,
                        },
                        (Term::Var(x), Term::Var(y)) if x == y => {}
                        _ => return false,
                    }
                }
                false
            }
        }
    }
}

fn flatten(t: &Term) -> Vec<&Term> {
    fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
        out.push(t);
        if let Term::App(_, args) = t {
            args.iter().for_each(|a| go(a, out));
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}
