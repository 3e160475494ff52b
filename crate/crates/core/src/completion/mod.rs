//! Critical pairs and Knuth-Bendix completion for string and term rules,
//! plus an observer report comparing branchial structure before and after
//! completion.

mod theory;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multiway::{branchial_graph, evolve, foliate, MultiwayGraph};
use crate::rewrite::{successors, Rule, State, StateKey, Substrate};
use crate::term::{Subst, TermOrdering};
use theory::{string_equations, term_equations, Equation, RawPair, Strings, Terms, Theory};

/// Shortlex on strings: shorter first, then lexicographic by symbol rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringOrdering {
    /// Symbols from least to greatest. Unlisted symbols rank above all
    /// listed ones and compare by code point.
    pub alphabet: Vec<char>,
}

impl StringOrdering {
    pub fn shortlex(least_first: &str) -> Self {
        StringOrdering {
            alphabet: least_first.chars().collect(),
        }
    }

    fn rank(&self, c: char) -> (usize, char) {
        match self.alphabet.iter().position(|&a| a == c) {
            Some(i) => (i, c),
            None => (self.alphabet.len(), c),
        }
    }

    pub fn compare(&self, a: &[char], b: &[char]) -> Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().map(|&c| self.rank(c)).cmp(b.iter().map(|&c| self.rank(c))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOrdering {
    Strings(StringOrdering),
    Terms(TermOrdering),
}

/// Where the inner redex sits inside the peak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Overlap {
    /// Start of the inner left-hand side within the peak string.
    Strings { offset: usize },
    /// Position of the inner redex and the most general unifier (over
    /// variables tagged `#1` for the outer rule and `#2` for the inner).
    Terms { position: Vec<usize>, unifier: Subst },
}

/// `peak` rewritten by `outer` at the root (or leftmost) gives `left`, by
/// `inner` at the overlap gives `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    pub peak: State,
    pub left: State,
    pub right: State,
    pub outer: String,
    pub inner: String,
    pub overlap: Overlap,
}

fn pairs_of<T: Theory>(th: &T, eqs: &[Equation<T::Obj>]) -> Vec<(usize, usize, RawPair<T::Obj>)> {
    let n = eqs.len();
    (0..n * n)
        .into_par_iter()
        .flat_map_iter(|k| {
            let (i, j) = (k / n, k % n);
            th.overlaps(&eqs[i], &eqs[j], i == j)
                .into_iter()
                .map(move |p| (i, j, p))
        })
        .collect()
}

fn public_pairs<T: Theory>(th: &T, eqs: &[Equation<T::Obj>]) -> Vec<CriticalPair> {
    pairs_of(th, eqs)
        .into_iter()
        .map(|(i, j, p)| CriticalPair {
            peak: th.state(&p.peak),
            left: th.state(&p.left),
            right: th.state(&p.right),
            outer: eqs[i].id.clone(),
            inner: eqs[j].id.clone(),
            overlap: p.overlap,
        })
        .collect()
}

fn substrate_of(rules: &[Rule]) -> Result<Substrate> {
    let s = rules.first().map_or(Substrate::String, Rule::substrate);
    if s == Substrate::Hypergraph {
        return Err(Error::SubstrateUnsupported(s));
    }
    Ok(s)
}

/// Every overlap between left-hand sides, ordered by (outer rule, inner
/// rule, overlap position). Trivial pairs are included.
pub fn critical_pairs(rules: &[Rule]) -> Result<Vec<CriticalPair>> {
    match substrate_of(rules)? {
        Substrate::Term => {
            let ordering = TermOrdering::lpo(&[]);
            Ok(public_pairs(&Terms(&ordering), &term_equations(rules)?))
        }
        _ => {
            let ordering = StringOrdering::shortlex("");
            Ok(public_pairs(&Strings(&ordering), &string_equations(rules)?))
        }
    }
}

fn reachable(start: &State, rules: &[Rule], depth: usize) -> Result<HashSet<StateKey>> {
    let mut seen = HashSet::from([start.key()]);
    let mut frontier = vec![start.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, t) in successors(s, rules)? {
                if seen.insert(t.key()) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

/// Whether both sides reach a common state within `depth` rewrites each.
pub fn joinable(pair: &CriticalPair, rules: &[Rule], depth: usize) -> Result<bool> {
    let a = reachable(&pair.left, rules, depth)?;
    let b = reachable(&pair.right, rules, depth)?;
    Ok(!a.is_disjoint(&b))
}

/// How a rule of the completed system came about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Input,
    /// Oriented from the normal forms of a critical pair.
    CriticalPair {
        outer: String,
        inner: String,
        peak: String,
    },
    /// Re-oriented after its left-hand side was reduced by other rules.
    Reduced {
        from: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub rule: String,
    pub origin: Origin,
    /// Rules used to normalize the sides when this rule was formed or
    /// later simplified.
    pub used: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionConfig {
    pub ordering: ReductionOrdering,
    pub max_rules: usize,
    pub max_iters: usize,
    pub interreduce: bool,
}

impl CompletionConfig {
    pub fn new(ordering: ReductionOrdering) -> Self {
        CompletionConfig {
            ordering,
            max_rules: 100,
            max_iters: 50,
            interreduce: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub rules: Vec<Rule>,
    pub provenance: Vec<Provenance>,
    pub iterations: usize,
    pub trace: Vec<String>,
}

pub fn knuth_bendix(
    rules: &[Rule],
    ordering: ReductionOrdering,
    max_rules: usize,
    max_iters: usize,
) -> Result<Completion> {
    knuth_bendix_with(
        rules,
        &CompletionConfig {
            max_rules,
            max_iters,
            ..CompletionConfig::new(ordering)
        },
    )
}

pub fn knuth_bendix_with(rules: &[Rule], config: &CompletionConfig) -> Result<Completion> {
    let substrate = substrate_of(rules)?;
    match (&config.ordering, substrate) {
        (ReductionOrdering::Strings(o), Substrate::String) => {
            Completer::new(Strings(o), config).run(string_equations(rules)?)
        }
        (ReductionOrdering::Terms(o), Substrate::Term) => Completer::new(Terms(o), config).run(term_equations(rules)?),
        (ReductionOrdering::Strings(_), found) => Err(Error::SubstrateMismatch {
            expected: Substrate::String,
            found,
        }),
        (ReductionOrdering::Terms(_), found) => Err(Error::SubstrateMismatch {
            expected: Substrate::Term,
            found,
        }),
    }
}

const NORMALIZE_CAP: usize = 100_000;

struct Completer<'c, T: Theory> {
    th: T,
    config: &'c CompletionConfig,
    eqs: Vec<Equation<T::Obj>>,
    provenance: Vec<Provenance>,
    trace: Vec<String>,
    fresh: usize,
    iteration: usize,
}

impl<'c, T: Theory> Completer<'c, T> {
    fn new(th: T, config: &'c CompletionConfig) -> Self {
        Completer {
            th,
            config,
            eqs: Vec::new(),
            provenance: Vec::new(),
            trace: Vec::new(),
            fresh: 0,
            iteration: 0,
        }
    }

    fn diverged(&self) -> Error {
        Error::Diverged {
            iterations: self.iteration,
            rules: self.eqs.len(),
        }
    }

    /// Normal form under `eqs` except the rule at `skip`, with the ids of
    /// the rules used.
    fn normalize(&self, o: &T::Obj, skip: Option<usize>) -> Result<(T::Obj, BTreeSet<String>)> {
        let active: Vec<Equation<T::Obj>> = match skip {
            Some(k) => self
                .eqs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, e)| e.clone())
                .collect(),
            None => self.eqs.clone(),
        };
        let mut cur = o.clone();
        let mut used = BTreeSet::new();
        for _ in 0..NORMALIZE_CAP {
            match self.th.rewrite_once(&cur, &active) {
                Some((next, i)) => {
                    used.insert(active[i].id.clone());
                    cur = next;
                }
                None => return Ok((cur, used)),
            }
        }
        Err(self.diverged())
    }

    fn orient(&self, a: T::Obj, b: T::Obj) -> Result<(T::Obj, T::Obj)> {
        let fail = || Error::OrderFailure {
            lhs: self.th.text(&a),
            rhs: self.th.text(&b),
        };
        match self.th.compare(&a, &b) {
            Ok(Ordering::Greater) => Ok(self.th.tidy(a, b)),
            Ok(Ordering::Less) => Ok(self.th.tidy(b, a)),
            _ => Err(fail()),
        }
    }

    fn push(&mut self, lhs: T::Obj, rhs: T::Obj, origin: Origin, used: BTreeSet<String>) -> Result<String> {
        self.fresh += 1;
        let id = format!("kb{}", self.fresh);
        self.eqs.push(Equation {
            id: id.clone(),
            lhs,
            rhs,
        });
        self.provenance.push(Provenance {
            rule: id.clone(),
            origin,
            used: used.into_iter().collect(),
        });
        if self.eqs.len() > self.config.max_rules {
            return Err(self.diverged());
        }
        Ok(id)
    }

    fn show(&self, i: usize) -> String {
        let e = &self.eqs[i];
        format!("{}: {} -> {}", e.id, self.th.text(&e.lhs), self.th.text(&e.rhs))
    }

    fn run(mut self, input: Vec<Equation<T::Obj>>) -> Result<Completion> {
        for e in &input {
            if self.th.compare(&e.lhs, &e.rhs).ok() != Some(Ordering::Greater) {
                return Err(Error::OrderFailure {
                    lhs: self.th.text(&e.lhs),
                    rhs: self.th.text(&e.rhs),
                });
            }
        }
        self.provenance = input
            .iter()
            .map(|e| Provenance {
                rule: e.id.clone(),
                origin: Origin::Input,
                used: Vec::new(),
            })
            .collect();
        self.eqs = input;
        loop {
            if self.iteration == self.config.max_iters {
                return Err(self.diverged());
            }
            self.iteration += 1;
            let snapshot = self.eqs.clone();
            let mut added = 0;
            for (i, j, pair) in pairs_of(&self.th, &snapshot) {
                let (a, mut used) = self.normalize(&pair.left, None)?;
                let (b, used_b) = self.normalize(&pair.right, None)?;
                if a == b {
                    continue;
                }
                used.extend(used_b);
                let (lhs, rhs) = self.orient(a, b)?;
                let origin = Origin::CriticalPair {
                    outer: snapshot[i].id.clone(),
                    inner: snapshot[j].id.clone(),
                    peak: self.th.text(&pair.peak),
                };
                self.push(lhs, rhs, origin, used)?;
                added += 1;
                let line = format!(
                    "iteration {}: pair {} / {} on {} gives ({}, {}); added {}",
                    self.iteration,
                    snapshot[i].id,
                    snapshot[j].id,
                    self.th.text(&pair.peak),
                    self.th.text(&pair.left),
                    self.th.text(&pair.right),
                    self.show(self.eqs.len() - 1)
                );
                self.trace.push(line);
            }
            if added == 0 {
                break;
            }
            if self.config.interreduce {
                self.interreduce()?;
            }
        }
        let rules = self.eqs.iter().map(|e| self.th.rule(e)).collect();
        Ok(Completion {
            rules,
            provenance: self.provenance,
            iterations: self.iteration,
            trace: self.trace,
        })
    }

    /// Drop rules whose left-hand side another rule reduces (re-adding the
    /// reduced equation if it is not trivial) and normalize right-hand sides.
    fn interreduce(&mut self) -> Result<()> {
        'outer: loop {
            for i in 0..self.eqs.len() {
                let lhs_reducible =
                    (0..self.eqs.len()).any(|j| j != i && self.th.reducible(&self.eqs[i].lhs, &self.eqs[j]));
                if lhs_reducible {
                    let (a, mut used) = self.normalize(&self.eqs[i].lhs, Some(i))?;
                    let (b, used_b) = self.normalize(&self.eqs[i].rhs, Some(i))?;
                    used.extend(used_b);
                    let removed = self.eqs.remove(i);
                    self.provenance.remove(i);
                    let shown = format!(
                        "{}: {} -> {}",
                        removed.id,
                        self.th.text(&removed.lhs),
                        self.th.text(&removed.rhs)
                    );
                    if a == b {
                        self.trace.push(format!("interreduce: removed {shown}"));
                    } else {
                        let (lhs, rhs) = self.orient(a, b)?;
                        self.push(
                            lhs,
                            rhs,
                            Origin::Reduced {
                                from: removed.id.clone(),
                            },
                            used,
                        )?;
                        let line = format!("interreduce: replaced {shown} by {}", self.show(self.eqs.len() - 1));
                        self.trace.push(line);
                    }
                    continue 'outer;
                }
                let (r, used) = self.normalize(&self.eqs[i].rhs, None)?;
                if r != self.eqs[i].rhs {
                    let (lhs, rhs) = self.th.tidy(self.eqs[i].lhs.clone(), r);
                    self.eqs[i].lhs = lhs;
                    self.eqs[i].rhs = rhs;
                    self.provenance[i].used.extend(used);
                    self.provenance[i].used.sort();
                    self.provenance[i].used.dedup();
                    let line = format!("interreduce: simplified {}", self.show(i));
                    self.trace.push(line);
                    continue 'outer;
                }
            }
            return Ok(());
        }
    }
}

/// Branchial size of one slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceSize {
    pub slice: usize,
    pub states: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverReport {
    pub before: Vec<SliceSize>,
    pub after: Vec<SliceSize>,
    pub completion: Completion,
}

fn slice_sizes(g: &MultiwayGraph, ancestor_depth: usize) -> Result<Vec<SliceSize>> {
    let f = foliate(g)?;
    (0..f.slices.len())
        .map(|i| {
            let b = branchial_graph(g, &f, i, ancestor_depth)?;
            Ok(SliceSize {
                slice: i,
                states: b.vertices.len(),
                edges: b.edges.len(),
            })
        })
        .collect()
}

/// Evolve under `rules`, complete them, evolve again under the completed
/// system, and report branchial sizes per slice for both runs.
pub fn observe(
    initial: &[State],
    rules: &[Rule],
    config: &CompletionConfig,
    steps: usize,
    ancestor_depth: usize,
) -> Result<ObserverReport> {
    let completion = knuth_bendix_with(rules, config)?;
    let before = slice_sizes(&evolve(initial, rules, steps)?, ancestor_depth)?;
    let after = slice_sizes(&evolve(initial, &completion.rules, steps)?, ancestor_depth)?;
    Ok(ObserverReport {
        before,
        after,
        completion,
    })
}

#[cfg(test)]
mod tests;
