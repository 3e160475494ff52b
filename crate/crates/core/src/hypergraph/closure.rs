//! Closure presets that turn a binary-edge hypergraph into the graph of a
//! small category (transitivity plus reflexivity) or of a groupoid (plus
//! symmetry). Input edges are kept; added edges get fresh tokens.

use std::collections::BTreeSet;

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::rewrite::{State, TokenMinter};

fn check_arity(h: &Hypergraph) -> Result<()> {
    match h.edges.iter().find(|e| e.len() > 2) {
        Some(e) => Err(Error::ArityError(e.len())),
        None => Ok(()),
    }
}

fn close(h: &Hypergraph, symmetric: bool) -> Result<Hypergraph> {
    check_arity(h)?;
    let mut minter = TokenMinter::after(&State::Hypergraph(h.clone()));
    let mut out = h.clone();
    let mut present: BTreeSet<(u32, u32)> = h.edges.iter().filter(|e| e.len() == 2).map(|e| (e[0], e[1])).collect();
    let mut add = |out: &mut Hypergraph, a: u32, b: u32, present: &mut BTreeSet<(u32, u32)>| {
        if present.insert((a, b)) {
            out.edges.push(vec![a, b]);
            out.tokens.push(minter.mint());
            true
        } else {
            false
        }
    };
    loop {
        let mut changed = false;
        if symmetric {
            for i in 0..out.edges.len() {
                if let [a, b] = out.edges[i][..] {
                    changed |= add(&mut out, b, a, &mut present);
                }
            }
        }
        let n = out.edges.len();
        for i in 0..n {
            for j in 0..n {
                if let ([a, b], [c, d]) = (&out.edges[i][..], &out.edges[j][..]) {
                    if b == c {
                        let (a, d) = (*a, *d);
                        changed |= add(&mut out, a, d, &mut present);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for v in h.vertices_in_order() {
        add(&mut out, v, v, &mut present);
    }
    Ok(out)
}

/// Least supergraph closed under `{a,b},{b,c} => {a,c}` with a loop at
/// every vertex.
pub fn categorify(h: &Hypergraph) -> Result<Hypergraph> {
    close(h, false)
}

/// `categorify` additionally closed under `{a,b} => {b,a}`.
pub fn groupoidify(h: &Hypergraph) -> Result<Hypergraph> {
    close(h, true)
}
