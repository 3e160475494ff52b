use std::collections::{BTreeSet, HashMap};

use super::cells::{cube_corners, square_corners, CellMode, LevelRelation, Side, Square};
use crate::error::{Error, Result};
use crate::multiway::MultiwayGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub dimension: usize,
    pub cells_checked: usize,
    pub violations: Vec<String>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that cells of `dimension` (2 or 3) compose. Pasting two
/// elementary cells along a shared face must yield a detected composite
/// cell unless the result is degenerate. For squares, every non-identity
/// horizontal side must also be both the top of some square and the bottom
/// of some square. Other dimensions have no cells and are trivially closed.
pub fn check_composition_closure(g: &MultiwayGraph, dimension: usize) -> ClosureReport {
    let (cells_checked, violations) = match dimension {
        2 => squares_closure(g),
        3 => cubes_closure(g),
        _ => (0, Vec::new()),
    };
    ClosureReport {
        dimension,
        cells_checked,
        violations,
    }
}

fn squares_closure(g: &MultiwayGraph) -> (usize, Vec<String>) {
    let ev = LevelRelation::new(g, 0, CellMode::Elementary);
    let eh = LevelRelation::new(g, 1, CellMode::Elementary);
    let cv = LevelRelation::new(g, 0, CellMode::Composite);
    let ch = LevelRelation::new(g, 1, CellMode::Composite);
    let squares = square_corners(&ev, &eh);
    let name = |i: usize| g.key_at(i).to_string();
    let mut violations = BTreeSet::new();

    let mut by_top: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut by_left: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, &[a, b, c, _]) in squares.iter().enumerate() {
        by_top.entry((a, c)).or_default().push(i);
        by_left.entry((a, b)).or_default().push(i);
    }
    let detected = |[a, b, c, d]: [usize; 4]| cv.admits(a, b) && cv.admits(c, d) && ch.admits(a, c) && ch.admits(b, d);
    let degenerate = |[a, b, c, d]: [usize; 4]| (a == b && c == d) || (a == c && b == d);
    for &[a, b, c, d] in &squares {
        let below = by_top.get(&(b, d)).into_iter().flatten().map(|&j| {
            let [_, e, _, f] = squares[j];
            [a, e, c, f]
        });
        let beside = by_left.get(&(c, d)).into_iter().flatten().map(|&j| {
            let [_, _, x, y] = squares[j];
            [a, b, x, y]
        });
        for pasted in below.chain(beside) {
            if !degenerate(pasted) && !detected(pasted) {
                violations.insert(format!("pasted square {} is not detected", pasted.map(name).join(" ")));
            }
        }
        for (x, y) in [(a, c), (b, d)] {
            if x == y {
                continue;
            }
            if !by_top.contains_key(&(x, y)) {
                violations.insert(format!(
                    "level-1 side {} -> {} is not the top of any square",
                    name(x),
                    name(y)
                ));
            }
            if !squares.iter().any(|s| (s[1], s[3]) == (x, y)) {
                violations.insert(format!(
                    "level-1 side {} -> {} is not the bottom of any square",
                    name(x),
                    name(y)
                ));
            }
        }
    }
    (squares.len(), violations.into_iter().collect())
}

fn cubes_closure(g: &MultiwayGraph) -> (usize, Vec<String>) {
    let elementary = [0, 1, 2].map(|l| LevelRelation::new(g, l, CellMode::Elementary));
    let composite = [0, 1, 2].map(|l| LevelRelation::new(g, l, CellMode::Composite));
    let cubes = cube_corners(&elementary);
    let name = |i: usize| g.key_at(i).to_string();
    let mut violations = BTreeSet::new();
    for axis in 0..3 {
        let low: Vec<usize> = (0..8).filter(|i| i & (1 << axis) == 0).collect();
        let high: Vec<usize> = low.iter().map(|i| i | 1 << axis).collect();
        let mut by_low: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (i, c) in cubes.iter().enumerate() {
            by_low.entry(low.iter().map(|&k| c[k]).collect()).or_default().push(i);
        }
        for c in &cubes {
            let face: Vec<usize> = high.iter().map(|&k| c[k]).collect();
            for &j in by_low.get(&face).into_iter().flatten() {
                let mut pasted = *c;
                for &k in &high {
                    pasted[k] = cubes[j][k];
                }
                let real = |k: usize| (0..8).any(|i| i & (1 << k) == 0 && pasted[i] != pasted[i | 1 << k]);
                if !(real(0) && real(1) && real(2)) {
                    continue;
                }
                let ok = (0..3).all(|k| {
                    (0..8)
                        .filter(|i| i & (1 << k) == 0)
                        .all(|i| composite[k].admits(pasted[i], pasted[i | 1 << k]))
                });
                if !ok {
                    violations.insert(format!("pasted cube {} is not detected", pasted.map(name).join(" ")));
                }
            }
        }
    }
    (cubes.len(), violations.into_iter().collect())
}

/// A 2-cell obtained by stacking squares: `top` and `bottom` are the
/// horizontal sides at either end; `left` and `right` the vertical paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastedCell {
    pub top: Side,
    pub bottom: Side,
    pub left: Vec<Side>,
    pub right: Vec<Side>,
}

impl PastedCell {
    /// Endpoints of the non-identity steps of a vertical path, starting
    /// at the path's first state.
    pub fn path_states(path: &[Side]) -> Vec<String> {
        let mut out: Vec<String> = path.first().map(|s| s.from.to_string()).into_iter().collect();
        out.extend(path.iter().filter(|s| !s.is_identity()).map(|s| s.to.to_string()));
        out
    }
}

/// Stack `squares` vertically: each square's bottom must be the next
/// square's top.
pub fn paste_vertical(squares: &[Square]) -> Result<PastedCell> {
    let (first, last) = match (squares.first(), squares.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::NotComposable("no squares to paste".into())),
    };
    for (i, w) in squares.windows(2).enumerate() {
        let (s, t) = (w[0].bottom(), w[1].top());
        if s.from != t.from || s.to != t.to {
            return Err(Error::NotComposable(format!(
                "bottom of square {i} ({} -> {}) differs from top of square {} ({} -> {})",
                s.from,
                s.to,
                i + 1,
                t.from,
                t.to
            )));
        }
    }
    Ok(PastedCell {
        top: first.top().clone(),
        bottom: last.bottom().clone(),
        left: squares.iter().map(|s| s.vertical[0].clone()).collect(),
        right: squares.iter().map(|s| s.vertical[1].clone()).collect(),
    })
}
