//! First-order term substrate. Function symbols have fixed arities, rule
//! variables may repeat (nonlinear matching), and every node of a state
//! carries a token, listed in pre-order.

mod order;

pub use order::{OrderKind, TermOrdering};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rewrite::{Binding, Event, Match, Rule, RuleBody, StateKey, Substrate, TokenId, TokenMinter};
use crate::syntax;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A function symbol applied to arguments; constants have none.
    App(String, Vec<Term>),
}

pub type Subst = BTreeMap<String, Term>;

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Occurrences of each variable.
    pub fn var_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.walk(&mut |t| {
            if let Term::Var(v) = t {
                *out.entry(v.clone()).or_insert(0) += 1;
            }
        });
        out
    }

    /// Visit nodes in pre-order.
    pub fn walk(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        if let Term::App(_, args) = self {
            for a in args {
                a.walk(f);
            }
        }
    }

    /// Paths (child-index sequences) of all nodes, in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        fn go(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(path.clone());
            if let Term::App(_, args) = t {
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    go(a, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            match t {
                Term::App(_, args) => t = args.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(t)
    }

    /// Pre-order index of the node at `path`.
    pub fn preorder_offset(&self, path: &[usize]) -> Option<usize> {
        let mut t = self;
        let mut offset = 0;
        for &i in path {
            let Term::App(_, args) = t else { return None };
            let child = args.get(i)?;
            offset += 1 + args[..i].iter().map(Term::size).sum::<usize>();
            t = child;
        }
        Some(offset)
    }

    /// Copy with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    Term::App(f.clone(), args)
                }
                Term::Var(_) => panic!("path runs through a variable"),
            },
        }
    }

    pub fn substitute(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(s)).collect()),
        }
    }

    /// Rename every variable through `f`.
    pub fn rename(&self, f: &mut impl FnMut(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| a.rename(f)).collect()),
        }
    }

    /// Function symbols with their arities, in pre-order of first use.
    pub fn signature(&self, out: &mut BTreeMap<String, usize>) -> Result<()> {
        let mut err = None;
        self.walk(&mut |t| {
            if let Term::App(f, args) = t {
                match out.get(f) {
                    Some(&n) if n != args.len() && err.is_none() => {
                        err = Some(Error::ArityClash {
                            symbol: f.clone(),
                            expected: n,
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                    None => {
                        out.insert(f.clone(), args.len());
                    }
                }
            }
        });
        err.map_or(Ok(()), Err)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(g, args) if args.is_empty() => f.write_str(g),
            Term::App(g, args) => {
                write!(f, "{g}[")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// One-way matching: extend `s` so that `pattern` under `s` equals `t`.
pub fn match_term(pattern: &Term, t: &Term, s: &mut Subst) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.insert(v.clone(), t.clone());
                true
            }
        },
        Term::App(f, pargs) => match t {
            Term::App(g, targs) if f == g && pargs.len() == targs.len() => {
                pargs.iter().zip(targs).all(|(p, a)| match_term(p, a, s))
            }
            _ => false,
        },
    }
}

/// Most general unifier, with occurs check.
pub fn unify(a: &Term, b: &Term) -> Option<Subst> {
    let mut s = Subst::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = stack.pop() {
        let x = resolve(&x, &s);
        let y = resolve(&y, &s);
        match (x, y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if occurs(&v, &t, &s) {
                    return None;
                }
                s.insert(v, t);
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                stack.extend(fa.into_iter().zip(ga));
            }
        }
    }
    // fully resolve bindings
    let keys: Vec<String> = s.keys().cloned().collect();
    let mut out = Subst::new();
    for k in keys {
        out.insert(k.clone(), deep_resolve(&Term::Var(k), &s));
    }
    Some(out)
}

fn resolve(t: &Term, s: &Subst) -> Term {
    let mut t = t.clone();
    while let Term::Var(v) = &t {
        match s.get(v) {
            Some(u) => t = u.clone(),
            None => break,
        }
    }
    t
}

fn deep_resolve(t: &Term, s: &Subst) -> Term {
    match resolve(t, s) {
        Term::App(f, args) => Term::App(f, args.iter().map(|a| deep_resolve(a, s)).collect()),
        v => v,
    }
}

fn occurs(v: &str, t: &Term, s: &Subst) -> bool {
    match resolve(t, s) {
        Term::Var(w) => w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
    }
}

/// A ground term with one token per node, in pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermState {
    pub term: Term,
    pub tokens: Vec<TokenId>,
}

impl TermState {
    /// Tokens `0..size`.
    pub fn new(term: Term) -> Self {
        let tokens = (0..term.size() as u64).map(TokenId).collect();
        TermState { term, tokens }
    }
}

impl fmt::Display for TermState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermRule {
    pub lhs: Term,
    pub rhs: Term,
}

impl TermRule {
    pub fn parse(lhs: &str, rhs: &str, vars: &[&str]) -> Result<Self> {
        let vars: BTreeSet<String> = vars.iter().map(|v| v.to_string()).collect();
        Ok(TermRule {
            lhs: syntax::parse_term(lhs, &vars)?,
            rhs: syntax::parse_term(rhs, &vars)?,
        })
    }

    /// The left-hand side is not a variable and binds every right-hand-side
    /// variable.
    pub fn check_bound(&self, id: &str) -> Result<()> {
        if matches!(self.lhs, Term::Var(_)) {
            return Err(Error::BareVariableLhs(id.to_string()));
        }
        let bound = self.lhs.vars();
        match self.rhs.vars().into_iter().find(|v| !bound.contains(v)) {
            Some(var) => Err(Error::UnboundVariable {
                rule: id.to_string(),
                var,
            }),
            None => Ok(()),
        }
    }

    /// Variables renamed `_0, _1, ...` by first occurrence, lhs first.
    pub fn normalized(&self) -> TermRule {
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let mut f = |v: &str| {
            let n = names.len();
            names.entry(v.to_string()).or_insert_with(|| format!("_{n}")).clone()
        };
        let lhs = self.lhs.rename(&mut f);
        let rhs = self.rhs.rename(&mut f);
        TermRule { lhs, rhs }
    }
}

impl fmt::Display for TermRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

fn term_rule(rule: &Rule) -> Result<&TermRule> {
    match &rule.body {
        RuleBody::Term(r) => Ok(r),
        _ => Err(Error::SubstrateMismatch {
            expected: Substrate::Term,
            found: rule.substrate(),
        }),
    }
}

/// Matches at every subterm position, in pre-order.
pub fn enumerate_matches(t: &TermState, rule: &Rule, rule_index: usize) -> Result<Vec<Match>> {
    let r = term_rule(rule)?;
    if matches!(r.lhs, Term::Var(_)) {
        return Err(Error::BareVariableLhs(rule.id.clone()));
    }
    let mut out = Vec::new();
    for (offset, position) in t.term.positions().into_iter().enumerate() {
        let sub = t.term.at(&position).expect("valid position");
        let mut subst = Subst::new();
        if match_term(&r.lhs, sub, &mut subst) {
            out.push(Match {
                rule_index,
                consumed: t.tokens[offset..offset + sub.size()].to_vec(),
                binding: Binding::Term { position, subst },
            });
        }
    }
    Ok(out)
}

/// Replace the matched subterm by the instantiated right-hand side. All of
/// the matched subterm's nodes are consumed; every node of the instance is
/// fresh.
pub fn apply_match(t: &TermState, rule: &Rule, m: &Match, minter: &mut TokenMinter) -> Result<(TermState, Event)> {
    let r = term_rule(rule)?;
    let Binding::Term { position, subst } = &m.binding else {
        return Err(Error::StaleMatch);
    };
    let (Some(sub), Some(offset)) = (t.term.at(position), t.term.preorder_offset(position)) else {
        return Err(Error::StaleMatch);
    };
    let mut check = Subst::new();
    let size = sub.size();
    if !match_term(&r.lhs, sub, &mut check) || check != *subst || t.tokens[offset..offset + size] != m.consumed[..] {
        return Err(Error::StaleMatch);
    }
    if let Some(var) = r.rhs.vars().into_iter().find(|v| !subst.contains_key(v)) {
        return Err(Error::UnboundVariable {
            rule: rule.id.clone(),
            var,
        });
    }
    let instance = r.rhs.substitute(subst);
    let produced = minter.mint_n(instance.size());
    let mut tokens = Vec::with_capacity(t.tokens.len() - size + produced.len());
    tokens.extend_from_slice(&t.tokens[..offset]);
    tokens.extend_from_slice(&produced);
    tokens.extend_from_slice(&t.tokens[offset + size..]);
    let result = TermState {
        term: t.term.replace_at(position, instance),
        tokens,
    };
    let event = Event::new(
        rule,
        StateKey::new(t.to_string()),
        StateKey::new(result.to_string()),
        m.consumed.clone(),
        produced,
        m.binding.clone(),
    );
    Ok((result, event))
}

/// The group presentation as a symmetric rule set: associativity in both
/// directions over variables `x, y, z`, and identity and inverse rules for
/// the generator `a` together with their reverses.
pub fn group_rules() -> Vec<Rule> {
    let vars = ["x", "y", "z"];
    let table = [
        ("assoc", "g[x, g[y, z]]", "g[g[x, y], z]"),
        ("assoc^-1", "g[g[x, y], z]", "g[x, g[y, z]]"),
        ("right-id", "g[a, e]", "a"),
        ("right-id^-1", "a", "g[a, e]"),
        ("left-id", "g[e, a]", "a"),
        ("left-id^-1", "a", "g[e, a]"),
        ("right-inv", "g[a, inv[a]]", "e"),
        ("right-inv^-1", "e", "g[a, inv[a]]"),
        ("left-inv", "g[inv[a], a]", "e"),
        ("left-inv^-1", "e", "g[inv[a], a]"),
    ];
    table
        .iter()
        .map(|(id, l, r)| Rule::term(*id, l, r, &vars).expect("preset parses"))
        .collect()
}

/// The standard group axioms over variables, for completion.
pub fn group_axioms() -> Vec<Rule> {
    let vars = ["x", "y", "z"];
    [
        ("assoc", "g[g[x, y], z]", "g[x, g[y, z]]"),
        ("left-id", "g[e, x]", "x"),
        ("left-inv", "g[inv[x], x]", "e"),
    ]
    .iter()
    .map(|(id, l, r)| Rule::term(*id, l, r, &vars).expect("preset parses"))
    .collect()
}
