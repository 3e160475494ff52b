//! Ordered-hypergraph substrate: states are multisets of hyperedges over
//! natural-number vertices, rules are set substitutions over vertex
//! variables, and states are identified up to isomorphism.

mod canon;
mod closure;

pub use closure::{categorify, groupoidify};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rewrite::{Binding, Event, Match, Rule, RuleBody, StateKey, Substrate, TokenId, TokenMinter};
use crate::syntax;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub edges: Vec<Vec<u32>>,
    /// One token per edge, parallel to `edges`.
    pub tokens: Vec<TokenId>,
}

/// Canonical representative of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// Sorted edges under the canonical vertex labeling `0..n`.
    pub edges: Vec<Vec<u32>>,
    pub certificate: Vec<u8>,
}

impl Hypergraph {
    /// Edges with tokens `0..len`.
    pub fn new(edges: Vec<Vec<u32>>) -> Self {
        let tokens = (0..edges.len() as u64).map(TokenId).collect();
        Hypergraph { edges, tokens }
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.edges.iter().flatten().copied().collect()
    }

    /// Vertices in order of first appearance.
    pub fn vertices_in_order(&self) -> Vec<u32> {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .flatten()
            .copied()
            .filter(|v| seen.insert(*v))
            .collect()
    }

    fn labeling(&self) -> canon::Labeling {
        let vertices: Vec<u32> = self.vertices().into_iter().collect();
        let dense: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|v| vertices.binary_search(v).unwrap()).collect())
            .collect();
        canon::canonical_labeling(vertices.len(), &dense, &vec![0; vertices.len()])
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let l = self.labeling();
        let edges: Vec<Vec<u32>> = l.edges.iter().map(|e| e.iter().map(|&v| v as u32).collect()).collect();
        let certificate = edges_text(&edges).into_bytes();
        CanonicalForm { edges, certificate }
    }

    /// The canonical representative, each edge keeping its token.
    pub fn canonical(&self) -> Hypergraph {
        let l = self.labeling();
        Hypergraph {
            edges: l.edges.iter().map(|e| e.iter().map(|&v| v as u32).collect()).collect(),
            tokens: l.order.iter().map(|&i| self.tokens[i]).collect(),
        }
    }

    pub fn canonical_text(&self) -> String {
        String::from_utf8(self.canonical_form().certificate).expect("ascii")
    }

    pub fn is_isomorphic(&self, other: &Hypergraph) -> bool {
        self.canonical_form() == other.canonical_form()
    }
}

/// Certificate of a vertex-colored hypergraph over vertices `0..colors.len()`.
/// Equal certificates iff there is a color-preserving isomorphism.
pub fn colored_certificate(colors: &[u64], edges: &[Vec<usize>]) -> Vec<u8> {
    let l = canon::canonical_labeling(colors.len(), edges, colors);
    let mut out = format!("{:?}|", l.colors);
    out.push_str(&format!("{:?}", l.edges));
    out.into_bytes()
}

fn edges_text<T: fmt::Display>(edges: &[Vec<T>]) -> String {
    let mut s = String::from("{");
    for (i, e) in edges.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push('{');
        for (j, v) in e.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&v.to_string());
        }
        s.push('}');
    }
    s.push('}');
    s
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&edges_text(&self.edges))
    }
}

/// Hyperedges over named vertex variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPattern {
    pub edges: Vec<Vec<String>>,
}

impl HPattern {
    pub fn vars(&self) -> BTreeSet<&str> {
        self.edges.iter().flatten().map(String::as_str).collect()
    }

    fn vars_in_order(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .flatten()
            .map(String::as_str)
            .filter(|v| seen.insert(*v))
            .collect()
    }
}

impl fmt::Display for HPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&edges_text(&self.edges))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphRule {
    pub lhs: HPattern,
    pub rhs: HPattern,
    /// Require distinct variables to bind distinct vertices.
    pub injective: bool,
}

impl HypergraphRule {
    pub fn parse(lhs: &str, rhs: &str) -> Result<Self> {
        Ok(HypergraphRule {
            lhs: syntax::parse_hpattern(lhs)?,
            rhs: syntax::parse_hpattern(rhs)?,
            injective: false,
        })
    }

    /// Treat each vertex of two concrete hypergraphs as a variable.
    pub fn from_concrete(lhs: &Hypergraph, rhs: &Hypergraph) -> Self {
        let pattern = |h: &Hypergraph| HPattern {
            edges: h
                .edges
                .iter()
                .map(|e| e.iter().map(|v| format!("v{v}")).collect())
                .collect(),
        };
        HypergraphRule {
            lhs: pattern(lhs),
            rhs: pattern(rhs),
            injective: true,
        }
    }

    /// Variables that occur only on the right-hand side, in order of first
    /// occurrence.
    pub fn fresh_vars(&self) -> Vec<&str> {
        let bound = self.lhs.vars();
        self.rhs
            .vars_in_order()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    /// Variables renamed `v0, v1, ...` by first occurrence across both sides.
    pub fn normalized(&self) -> HypergraphRule {
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let mut rename = |p: &HPattern| HPattern {
            edges: p
                .edges
                .iter()
                .map(|e| {
                    e.iter()
                        .map(|v| {
                            let n = names.len();
                            names.entry(v.clone()).or_insert_with(|| format!("v{n}")).clone()
                        })
                        .collect()
                })
                .collect(),
        };
        let lhs = rename(&self.lhs);
        let rhs = rename(&self.rhs);
        HypergraphRule {
            lhs,
            rhs,
            injective: self.injective,
        }
    }
}

impl fmt::Display for HypergraphRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        if self.injective {
            f.write_str(" @injective")?;
        }
        Ok(())
    }
}

fn hypergraph_rule(rule: &Rule) -> Result<&HypergraphRule> {
    match &rule.body {
        RuleBody::Hypergraph(r) => Ok(r),
        _ => Err(Error::SubstrateMismatch {
            expected: Substrate::Hypergraph,
            found: rule.substrate(),
        }),
    }
}

/// Bind pattern edge `p` to host edge `e`, extending `vars`; returns the
/// variables newly bound so the caller can undo them.
fn bind_edge(p: &[String], e: &[u32], vars: &mut BTreeMap<String, u32>, injective: bool) -> Option<Vec<String>> {
    if p.len() != e.len() {
        return None;
    }
    let mut added: Vec<String> = Vec::new();
    for (x, &v) in p.iter().zip(e) {
        match vars.get(x) {
            Some(&w) if w == v => {}
            Some(_) => {
                for a in &added {
                    vars.remove(a);
                }
                return None;
            }
            None => {
                if injective && vars.values().any(|&w| w == v) {
                    for a in &added {
                        vars.remove(a);
                    }
                    return None;
                }
                vars.insert(x.clone(), v);
                added.push(x.clone());
            }
        }
    }
    Some(added)
}

fn search(
    h: &Hypergraph,
    r: &HypergraphRule,
    chosen: &mut Vec<usize>,
    vars: &mut BTreeMap<String, u32>,
    out: &mut Vec<(Vec<usize>, BTreeMap<String, u32>)>,
) {
    let k = chosen.len();
    if k == r.lhs.edges.len() {
        out.push((chosen.clone(), vars.clone()));
        return;
    }
    for j in 0..h.edges.len() {
        if chosen.contains(&j) {
            continue;
        }
        if let Some(added) = bind_edge(&r.lhs.edges[k], &h.edges[j], vars, r.injective) {
            chosen.push(j);
            search(h, r, chosen, vars, out);
            chosen.pop();
            for a in added {
                vars.remove(&a);
            }
        }
    }
}

/// Edge-injective matches of the rule's left-hand side, ordered by the tuple
/// of host edge indices.
pub fn enumerate_matches(h: &Hypergraph, rule: &Rule, rule_index: usize) -> Result<Vec<Match>> {
    let r = hypergraph_rule(rule)?;
    if r.lhs.edges.is_empty() {
        return Err(Error::EmptyLhs(rule.id.clone()));
    }
    let mut found = Vec::new();
    search(h, r, &mut Vec::new(), &mut BTreeMap::new(), &mut found);
    Ok(found
        .into_iter()
        .map(|(edges, vars)| {
            let mut idx = edges.clone();
            idx.sort_unstable();
            Match {
                rule_index,
                consumed: idx.iter().map(|&i| h.tokens[i]).collect(),
                binding: Binding::Hypergraph { edges, vars },
            }
        })
        .collect())
}

/// Remove the matched edges and append the instantiated right-hand side.
/// Fresh variables receive the smallest positive vertices absent from `h`.
pub fn apply_match(h: &Hypergraph, rule: &Rule, m: &Match, minter: &mut TokenMinter) -> Result<(Hypergraph, Event)> {
    let r = hypergraph_rule(rule)?;
    let Binding::Hypergraph { edges, vars } = &m.binding else {
        return Err(Error::StaleMatch);
    };
    if edges.len() != r.lhs.edges.len() || edges.iter().any(|&i| i >= h.edges.len()) {
        return Err(Error::StaleMatch);
    }
    let mut check = BTreeMap::new();
    for (p, &i) in r.lhs.edges.iter().zip(edges) {
        if bind_edge(p, &h.edges[i], &mut check, r.injective).is_none() {
            return Err(Error::StaleMatch);
        }
    }
    let mut idx = edges.clone();
    idx.sort_unstable();
    idx.dedup();
    let consumed: Vec<TokenId> = idx.iter().map(|&i| h.tokens[i]).collect();
    if check != *vars || idx.len() != edges.len() || consumed != m.consumed {
        return Err(Error::StaleMatch);
    }

    let present = h.vertices();
    let mut binding = vars.clone();
    let mut candidate = 1u32;
    for v in r.fresh_vars() {
        while present.contains(&candidate) {
            candidate += 1;
        }
        binding.insert(v.to_string(), candidate);
        candidate += 1;
    }

    let mut out = Hypergraph {
        edges: Vec::new(),
        tokens: Vec::new(),
    };
    for (i, (e, t)) in h.edges.iter().zip(&h.tokens).enumerate() {
        if idx.binary_search(&i).is_err() {
            out.edges.push(e.clone());
            out.tokens.push(*t);
        }
    }
    let produced = minter.mint_n(r.rhs.edges.len());
    for (p, t) in r.rhs.edges.iter().zip(&produced) {
        out.edges.push(p.iter().map(|x| binding[x]).collect());
        out.tokens.push(*t);
    }
    let event = Event::new(
        rule,
        StateKey::new(h.canonical_text()),
        StateKey::new(out.canonical_text()),
        consumed,
        produced,
        m.binding.clone(),
    );
    Ok((out, event))
}
