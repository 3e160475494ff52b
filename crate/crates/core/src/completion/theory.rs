//! The two equational theories completion works over: strings under
//! shortlex and first-order terms under a term ordering.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Overlap, StringOrdering};
use crate::error::{Error, Result};
use crate::rewrite::{Rule, RuleBody, State};
use crate::strings::{symbols_text, StringRule, StringState};
use crate::term::{match_term, unify, Subst, Term, TermOrdering, TermRule, TermState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Equation<O> {
    pub id: String,
    pub lhs: O,
    pub rhs: O,
}

pub(crate) struct RawPair<O> {
    pub peak: O,
    pub left: O,
    pub right: O,
    pub overlap: Overlap,
}

pub(crate) trait Theory: Sync {
    type Obj: Clone + Eq + Send + Sync + std::fmt::Debug;

    /// One rewrite step by the first applicable rule, with that rule's index.
    fn rewrite_once(&self, o: &Self::Obj, rules: &[Equation<Self::Obj>]) -> Option<(Self::Obj, usize)>;
    /// Overlaps of `inner`'s lhs into `outer`'s lhs. `same` when both are
    /// one rule, so the trivial root overlap is skipped.
    fn overlaps(&self, outer: &Equation<Self::Obj>, inner: &Equation<Self::Obj>, same: bool)
        -> Vec<RawPair<Self::Obj>>;
    fn reducible(&self, o: &Self::Obj, by: &Equation<Self::Obj>) -> bool;
    fn compare(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Ordering>;
    /// Variable renaming to a canonical form (identity for strings).
    fn tidy(&self, l: Self::Obj, r: Self::Obj) -> (Self::Obj, Self::Obj);
    fn text(&self, o: &Self::Obj) -> String;
    fn state(&self, o: &Self::Obj) -> State;
    fn rule(&self, eq: &Equation<Self::Obj>) -> Rule;
}

pub(crate) struct Strings<'a>(pub &'a StringOrdering);

impl Theory for Strings<'_> {
    type Obj = Vec<char>;

    fn rewrite_once(&self, o: &Vec<char>, rules: &[Equation<Vec<char>>]) -> Option<(Vec<char>, usize)> {
        for start in 0..=o.len() {
            for (i, r) in rules.iter().enumerate() {
                if !r.lhs.is_empty() && o[start..].starts_with(&r.lhs) {
                    let mut out = o[..start].to_vec();
                    out.extend_from_slice(&r.rhs);
                    out.extend_from_slice(&o[start + r.lhs.len()..]);
                    return Some((out, i));
                }
            }
        }
        None
    }

    fn overlaps(
        &self,
        outer: &Equation<Vec<char>>,
        inner: &Equation<Vec<char>>,
        same: bool,
    ) -> Vec<RawPair<Vec<char>>> {
        let (l1, l2) = (&outer.lhs, &inner.lhs);
        let mut out = Vec::new();
        // inner lhs inside outer lhs
        if l2.len() <= l1.len() {
            for p in 0..=l1.len() - l2.len() {
                if (same && p == 0) || l1[p..p + l2.len()] != l2[..] {
                    continue;
                }
                let mut right = l1[..p].to_vec();
                right.extend_from_slice(&inner.rhs);
                right.extend_from_slice(&l1[p + l2.len()..]);
                out.push(RawPair {
                    peak: l1.clone(),
                    left: outer.rhs.clone(),
                    right,
                    overlap: Overlap::Strings { offset: p },
                });
            }
        }
        // proper suffix of outer lhs equal to a proper prefix of inner lhs
        for k in 1..l1.len().min(l2.len()) {
            if l1[l1.len() - k..] != l2[..k] {
                continue;
            }
            let mut peak = l1.clone();
            peak.extend_from_slice(&l2[k..]);
            let mut left = outer.rhs.clone();
            left.extend_from_slice(&l2[k..]);
            let mut right = l1[..l1.len() - k].to_vec();
            right.extend_from_slice(&inner.rhs);
            out.push(RawPair {
                peak,
                left,
                right,
                overlap: Overlap::Strings { offset: l1.len() - k },
            });
        }
        out
    }

    fn reducible(&self, o: &Vec<char>, by: &Equation<Vec<char>>) -> bool {
        !by.lhs.is_empty() && o.windows(by.lhs.len()).any(|w| w == &by.lhs[..])
    }

    fn compare(&self, a: &Vec<char>, b: &Vec<char>) -> Result<Ordering> {
        Ok(self.0.compare(a, b))
    }

    fn tidy(&self, l: Vec<char>, r: Vec<char>) -> (Vec<char>, Vec<char>) {
        (l, r)
    }

    fn text(&self, o: &Vec<char>) -> String {
        symbols_text(o)
    }

    fn state(&self, o: &Vec<char>) -> State {
        State::String(StringState::new(&o.iter().collect::<String>()))
    }

    fn rule(&self, eq: &Equation<Vec<char>>) -> Rule {
        Rule::new(
            eq.id.clone(),
            RuleBody::String(StringRule::from_symbols(eq.lhs.clone(), eq.rhs.clone())),
        )
    }
}

pub(crate) struct Terms<'a>(pub &'a TermOrdering);

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn var_name(i: usize) -> String {
    VAR_NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())
}

/// Rename variables in order of first appearance across `terms`.
pub(crate) fn rename_canonical(terms: &[&Term]) -> Vec<Term> {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    for t in terms {
        t.walk(&mut |s| {
            if let Term::Var(v) = s {
                if !names.contains_key(v) {
                    let n = var_name(names.len());
                    names.insert(v.clone(), n);
                }
            }
        });
    }
    terms.iter().map(|t| t.rename(&mut |v| names[v].clone())).collect()
}

fn tag(t: &Term, side: &str) -> Term {
    t.rename(&mut |v| format!("{v}#{side}"))
}

impl Theory for Terms<'_> {
    type Obj = Term;

    fn rewrite_once(&self, o: &Term, rules: &[Equation<Term>]) -> Option<(Term, usize)> {
        for p in o.positions() {
            let sub = o.at(&p).expect("position");
            if matches!(sub, Term::Var(_)) {
                continue;
            }
            for (i, r) in rules.iter().enumerate() {
                let mut s = Subst::new();
                if match_term(&r.lhs, sub, &mut s) {
                    return Some((o.replace_at(&p, r.rhs.substitute(&s)), i));
                }
            }
        }
        None
    }

    fn overlaps(&self, outer: &Equation<Term>, inner: &Equation<Term>, same: bool) -> Vec<RawPair<Term>> {
        let (l1, r1) = (tag(&outer.lhs, "1"), tag(&outer.rhs, "1"));
        let (l2, r2) = (tag(&inner.lhs, "2"), tag(&inner.rhs, "2"));
        let mut out = Vec::new();
        for p in l1.positions() {
            let sub = l1.at(&p).expect("position");
            if matches!(sub, Term::Var(_)) || (same && p.is_empty()) {
                continue;
            }
            let Some(mgu) = unify(sub, &l2) else { continue };
            let peak = l1.substitute(&mgu);
            let left = r1.substitute(&mgu);
            let right = peak.replace_at(&p, r2.substitute(&mgu));
            let renamed = rename_canonical(&[&peak, &left, &right]);
            let unifier = mgu.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            let [peak, left, right]: [Term; 3] = renamed.try_into().expect("three terms");
            out.push(RawPair {
                peak,
                left,
                right,
                overlap: Overlap::Terms { position: p, unifier },
            });
        }
        out
    }

    fn reducible(&self, o: &Term, by: &Equation<Term>) -> bool {
        o.positions().iter().any(|p| {
            let sub = o.at(p).expect("position");
            !matches!(sub, Term::Var(_)) && match_term(&by.lhs, sub, &mut Subst::new())
        })
    }

    fn compare(&self, a: &Term, b: &Term) -> Result<Ordering> {
        self.0.compare(a, b)
    }

    fn tidy(&self, l: Term, r: Term) -> (Term, Term) {
        let mut v = rename_canonical(&[&l, &r]);
        let r = v.pop().expect("rhs");
        (v.pop().expect("lhs"), r)
    }

    fn text(&self, o: &Term) -> String {
        o.to_string()
    }

    fn state(&self, o: &Term) -> State {
        State::Term(TermState::new(o.clone()))
    }

    fn rule(&self, eq: &Equation<Term>) -> Rule {
        Rule::new(
            eq.id.clone(),
            RuleBody::Term(TermRule {
                lhs: eq.lhs.clone(),
                rhs: eq.rhs.clone(),
            }),
        )
    }
}

pub(crate) fn string_equations(rules: &[Rule]) -> Result<Vec<Equation<Vec<char>>>> {
    rules
        .iter()
        .map(|r| r.unanchored())
        .map(|r| match &r.body {
            RuleBody::String(s) => Ok(Equation {
                id: r.id.clone(),
                lhs: s.lhs.clone(),
                rhs: s.rhs.clone(),
            }),
            _ => Err(Error::SubstrateMismatch {
                expected: crate::rewrite::Substrate::String,
                found: r.substrate(),
            }),
        })
        .collect()
}

pub(crate) fn term_equations(rules: &[Rule]) -> Result<Vec<Equation<Term>>> {
    rules
        .iter()
        .map(|r| r.unanchored())
        .map(|r| match &r.body {
            RuleBody::Term(t) => Ok(Equation {
                id: r.id.clone(),
                lhs: t.lhs.clone(),
                rhs: t.rhs.clone(),
            }),
            _ => Err(Error::SubstrateMismatch {
                expected: crate::rewrite::Substrate::Term,
                found: r.substrate(),
            }),
        })
        .collect()
}
