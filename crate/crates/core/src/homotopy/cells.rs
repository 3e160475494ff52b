//! Squares and cubes under thin-category semantics: a side is any morphism
//! of its level between its endpoints (or an identity), and parallel
//! morphisms with equal endpoints are not distinguished.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::multiway::MultiwayGraph;
use crate::rewrite::{EventId, StateKey};

/// What counts as a side of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellMode {
    /// A single edge of the side's level, or an identity.
    Elementary,
    /// Any path of edges of the side's level, or an identity.
    Composite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Identity,
    Edge(EventId),
    Path(Vec<EventId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Side {
    pub from: StateKey,
    pub to: StateKey,
    pub level: u32,
    pub witness: Witness,
}

impl Side {
    pub fn is_identity(&self) -> bool {
        self.witness == Witness::Identity
    }
}

/// Corners `[a, b, c, d]` with vertical sides `a -> b`, `c -> d` and
/// horizontal sides `a -> c`, `b -> d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Square {
    pub corners: [StateKey; 4],
    pub vertical: [Side; 2],
    pub horizontal: [Side; 2],
}

impl Square {
    pub fn top(&self) -> &Side {
        &self.horizontal[0]
    }

    pub fn bottom(&self) -> &Side {
        &self.horizontal[1]
    }
}

/// Corners indexed by three bits, bit `k` being the position along axis
/// `k`. `sides` lists the 12 sides axis by axis, each axis in increasing
/// order of the corner the side starts from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    pub corners: [StateKey; 8],
    pub sides: Vec<Side>,
}

impl Cube {
    /// Side along `axis` starting at corner `from` (whose `axis` bit is 0).
    pub fn side(&self, axis: usize, from: usize) -> &Side {
        let rank = (0..8)
            .filter(|i| i & (1 << axis) == 0)
            .position(|i| i == from)
            .expect("side start");
        &self.sides[axis * 4 + rank]
    }

    /// The face with `axis` fixed at `high`. Its vertical direction is the
    /// lower of the two remaining axes.
    pub fn face(&self, axis: usize, high: bool) -> Square {
        let (p, q) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let base = if high { 1 << axis } else { 0 };
        let (a, b, c, d) = (base, base | 1 << p, base | 1 << q, base | 1 << p | 1 << q);
        Square {
            corners: [a, b, c, d].map(|i| self.corners[i].clone()),
            vertical: [self.side(p, a).clone(), self.side(p, c).clone()],
            horizontal: [self.side(q, a).clone(), self.side(q, b).clone()],
        }
    }

    pub fn faces(&self) -> Vec<Square> {
        (0..3).flat_map(|k| [self.face(k, false), self.face(k, true)]).collect()
    }
}

/// Reachability for the edges of one level.
pub(crate) struct LevelRelation {
    pub level: u32,
    pub mode: CellMode,
    /// `reach[a]` contains `a` and every admissible side target.
    pub reach: Vec<FixedBitSet>,
    /// Outgoing edges `(target, event)` in ascending event order.
    out: Vec<Vec<(usize, EventId)>>,
}

impl LevelRelation {
    pub fn new(g: &MultiwayGraph, level: u32, mode: CellMode) -> Self {
        let n = g.states.len();
        let mut out = vec![Vec::new(); n];
        for e in g.events.iter().filter(|e| e.level == level) {
            let s = g.states.get_index_of(&e.source).expect("stored");
            let t = g.states.get_index_of(&e.target).expect("stored");
            out[s].push((t, e.id));
        }
        let reach = (0..n)
            .map(|a| {
                let mut set = FixedBitSet::with_capacity(n);
                set.insert(a);
                match mode {
                    CellMode::Elementary => out[a].iter().for_each(|&(t, _)| set.insert(t)),
                    CellMode::Composite => {
                        let mut stack = vec![a];
                        while let Some(v) = stack.pop() {
                            for &(t, _) in &out[v] {
                                if !set.put(t) {
                                    stack.push(t);
                                }
                            }
                        }
                    }
                }
                set
            })
            .collect();
        LevelRelation {
            level,
            mode,
            reach,
            out,
        }
    }

    pub fn admits(&self, a: usize, b: usize) -> bool {
        self.reach[a].contains(b)
    }

    /// The side `a -> b`; `admits(a, b)` must hold.
    pub fn side(&self, g: &MultiwayGraph, a: usize, b: usize) -> Side {
        let witness = if a == b {
            Witness::Identity
        } else {
            match self.mode {
                CellMode::Elementary => {
                    Witness::Edge(self.out[a].iter().find(|&&(t, _)| t == b).expect("edge present").1)
                }
                CellMode::Composite => Witness::Path(self.shortest_path(a, b)),
            }
        };
        Side {
            from: g.key_at(a).clone(),
            to: g.key_at(b).clone(),
            level: self.level,
            witness,
        }
    }

    fn shortest_path(&self, a: usize, b: usize) -> Vec<EventId> {
        let mut parent: Vec<Option<(usize, EventId)>> = vec![None; self.out.len()];
        let mut queue = VecDeque::from([a]);
        let mut seen = FixedBitSet::with_capacity(self.out.len());
        seen.insert(a);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &(t, e) in &self.out[v] {
                if !seen.put(t) {
                    parent[t] = Some((v, e));
                    queue.push_back(t);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = b;
        while let Some((p, e)) = parent[v] {
            path.push(e);
            v = p;
        }
        path.reverse();
        path
    }
}

/// Elementary squares with level-0 vertical and level-1 horizontal sides.
pub fn find_squares(g: &MultiwayGraph) -> Vec<Square> {
    find_squares_with(g, CellMode::Elementary, 0, 1)
}

/// Every corner quadruple whose sides are admissible and which has at
/// least one non-identity side in each direction. Triangles (one identity
/// side) are included.
pub fn find_squares_with(g: &MultiwayGraph, mode: CellMode, vertical: u32, horizontal: u32) -> Vec<Square> {
    let v = LevelRelation::new(g, vertical, mode);
    let h = LevelRelation::new(g, horizontal, mode);
    let quads = square_corners(&v, &h);
    quads
        .into_par_iter()
        .map(|[a, b, c, d]| Square {
            corners: [a, b, c, d].map(|i| g.key_at(i).clone()),
            vertical: [v.side(g, a, b), v.side(g, c, d)],
            horizontal: [h.side(g, a, c), h.side(g, b, d)],
        })
        .collect()
}

pub(crate) fn square_corners(v: &LevelRelation, h: &LevelRelation) -> Vec<[usize; 4]> {
    let n = v.reach.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            for b in v.reach[a].ones() {
                for c in h.reach[a].ones() {
                    let mut ds = h.reach[b].clone();
                    ds.intersect_with(&v.reach[c]);
                    for d in ds.ones() {
                        if (a != b || c != d) && (a != c || b != d) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Cubes with axis levels 0, 1, 2 and composite sides.
pub fn find_cubes(g: &MultiwayGraph) -> Vec<Cube> {
    find_cubes_with(g, CellMode::Composite, [0, 1, 2])
}

/// Every 8-corner configuration whose 12 sides are admissible for their
/// axis level and which has a non-identity side along each axis. Faces may
/// be degenerate.
pub fn find_cubes_with(g: &MultiwayGraph, mode: CellMode, levels: [u32; 3]) -> Vec<Cube> {
    let rel = levels.map(|l| LevelRelation::new(g, l, mode));
    cube_corners(&rel)
        .into_par_iter()
        .map(|c| {
            let mut sides = Vec::with_capacity(12);
            for (k, r) in rel.iter().enumerate() {
                for i in (0..8).filter(|i| i & (1 << k) == 0) {
                    sides.push(r.side(g, c[i], c[i | 1 << k]));
                }
            }
            Cube {
                corners: c.map(|i| g.key_at(i).clone()),
                sides,
            }
        })
        .collect()
}

pub(crate) fn cube_corners(rel: &[LevelRelation; 3]) -> Vec<[usize; 8]> {
    let [r0, r1, r2] = rel;
    let n = r0.reach.len();
    let meet = |sets: &[&FixedBitSet]| {
        let mut s = sets[0].clone();
        for t in &sets[1..] {
            s.intersect_with(t);
        }
        s
    };
    (0..n)
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut out = Vec::new();
            for c1 in r0.reach[c0].ones() {
                for c2 in r1.reach[c0].ones() {
                    for c4 in r2.reach[c0].ones() {
                        for c3 in meet(&[&r1.reach[c1], &r0.reach[c2]]).ones() {
                            for c5 in meet(&[&r2.reach[c1], &r0.reach[c4]]).ones() {
                                for c6 in meet(&[&r2.reach[c2], &r1.reach[c4]]).ones() {
                                    for c7 in meet(&[&r2.reach[c3], &r1.reach[c5], &r0.reach[c6]]).ones() {
                                        let c = [c0, c1, c2, c3, c4, c5, c6, c7];
                                        let real =
                                            |k: usize| (0..8).any(|i| i & (1 << k) == 0 && c[i] != c[i | 1 << k]);
                                        if real(0) && real(1) && real(2) {
                                            out.push(c);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect()
}
