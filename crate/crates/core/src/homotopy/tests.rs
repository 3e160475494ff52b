use std::collections::BTreeSet;

use super::*;
use crate::multiway::{evolve, paths_between};
use crate::rewrite::{add_inverses, EventId, StateKey, Substrate};

const RED: [&str; 7] = ["AA", "AAB", "AABB", "AABBB", "ABABBB", "ABBABBB", "ABBBABBB"];
const YELLOW: [&str; 7] = ["AA", "ABA", "ABBA", "ABBBA", "ABBBAB", "ABBBABB", "ABBBABBB"];
const LEVEL1: [(&str, &str); 5] = [
    ("AAB", "ABA"),
    ("AABB", "ABBA"),
    ("AABBB", "ABBBA"),
    ("ABABBB", "ABBBAB"),
    ("ABBABBB", "ABBBABB"),
];
const LEVEL2: [(&str, &str); 4] = [
    ("AA", "ABAB"),
    ("ABBBBABBBB", "ABBBABBB"),
    ("AABBBB", "ABABBB"),
    ("ABBBBA", "ABBBAB"),
];

fn s(text: &str) -> State {
    State::parse(Substrate::String, text).unwrap()
}

fn k(text: &str) -> StateKey {
    StateKey::new(text)
}

fn whole_rules(pairs: &[(&str, &str)], level: u32) -> Vec<Rule> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (l, r))| {
            Rule::whole(format!("h{level}.{}", i + 1), s(l), s(r))
                .unwrap()
                .with_level(level)
        })
        .collect()
}

fn base_graph(steps: usize) -> MultiwayGraph {
    evolve(&[s("AA")], &[Rule::string("r", "A", "AB")], steps).unwrap()
}

fn induced() -> MultiwayGraph {
    induce(&base_graph(6), &whole_rules(&LEVEL1, 1), 6).unwrap()
}

fn ladder_keys() -> Vec<StateKey> {
    RED.iter()
        .chain(YELLOW.iter())
        .map(|t| k(t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn rule_pairs(rules: &[Rule]) -> BTreeSet<(String, String)> {
    rules.iter().map(|r| (r.lhs_text(), r.rhs_text())).collect()
}

fn ladder_squares(g: &MultiwayGraph) -> Vec<Square> {
    let squares = find_squares(g);
    (0..RED.len() - 1)
        .filter_map(|i| {
            let want = [RED[i], RED[i + 1], YELLOW[i], YELLOW[i + 1]].map(k);
            squares.iter().find(|q| q.corners == want).cloned()
        })
        .collect()
}

#[test]
fn synthesizes_the_five_rules() {
    let rules = synthesize_homotopy_rules(&RED.map(s), &YELLOW.map(s), 1).unwrap();
    let want: BTreeSet<_> = LEVEL1.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    assert_eq!(rule_pairs(&rules), want);
    assert!(rules.iter().all(|r| r.level == 1 && r.is_anchored()));
}

#[test]
fn synthesis_from_graph_paths() {
    let g = base_graph(6);
    let paths = paths_between(&g, &k("AA"), &k("ABBBABBB"), 100, 6).unwrap();
    let find = |want: &[&str; 7]| {
        paths
            .iter()
            .find(|p| p.states.iter().map(|x| x.as_str()).eq(want.iter().copied()))
            .unwrap()
            .clone()
    };
    let p1 = path_states(&g, &find(&RED)).unwrap();
    let p2 = path_states(&g, &find(&YELLOW)).unwrap();
    let rules = synthesize_homotopy_rules(&p1, &p2, 1).unwrap();
    assert_eq!(rules.len(), 5);
}

#[test]
fn synthesis_edge_cases() {
    assert!(synthesize_homotopy_rules(&RED.map(s), &RED.map(s), 1)
        .unwrap()
        .is_empty());
    assert_eq!(
        synthesize_homotopy_rules(&RED.map(s), &YELLOW[..6].iter().map(|t| s(t)).collect::<Vec<_>>(), 1),
        Err(Error::LengthMismatch(7, 6))
    );
    let shifted = ["AB", "ABA", "ABBA", "ABBBA", "ABBBAB", "ABBBABB", "ABBBABBB"].map(s);
    assert_eq!(
        synthesize_homotopy_rules(&RED.map(s), &shifted, 1),
        Err(Error::EndpointMismatch)
    );
    let level2 = synthesize_homotopy_rules(&RED.map(s), &YELLOW.map(s), 2).unwrap();
    assert!(level2.iter().all(|r| r.level == 2 && r.id.starts_with("h2.")));
}

#[test]
fn synthesized_rules_pair_states_of_one_slice() {
    let g = base_graph(6);
    for r in synthesize_homotopy_rules(&RED.map(s), &YELLOW.map(s), 1).unwrap() {
        let gen = |t: String| g.states[&k(&t)].generation;
        assert_eq!(gen(r.lhs_text()), gen(r.rhs_text()));
    }
}

#[test]
fn induce_adds_anchored_level_one_edges() {
    let g = induced();
    let lifted: BTreeSet<(String, String)> = g
        .events
        .iter()
        .filter(|e| e.level == 1)
        .map(|e| (e.source.to_string(), e.target.to_string()))
        .collect();
    assert!(lifted.len() >= 5);
    assert!(lifted.contains(&("AAB".into(), "ABA".into())));
    let lhs: BTreeSet<String> = LEVEL1.iter().map(|(l, _)| l.to_string()).collect();
    assert!(lifted.iter().all(|(a, _)| lhs.contains(a)));
}

#[test]
fn induce_without_rules_reproduces_the_graph() {
    let g = base_graph(5);
    assert_eq!(induce(&g, &[], 5).unwrap(), g);
}

#[test]
fn restriction_to_the_ladder() {
    let g = induced().restrict(&ladder_keys());
    let got: BTreeSet<(String, String, u32)> = g
        .events
        .iter()
        .map(|e| (e.source.to_string(), e.target.to_string(), e.level))
        .collect();
    let mut want = BTreeSet::new();
    for p in [RED, YELLOW] {
        for w in p.windows(2) {
            want.insert((w[0].to_string(), w[1].to_string(), 0));
        }
    }
    for (a, b) in LEVEL1 {
        want.insert((a.to_string(), b.to_string(), 1));
    }
    assert_eq!(got, want);
}

#[test]
fn first_square_is_a_triangle_at_aa() {
    let g = induced();
    let squares = find_squares(&g);
    let first = squares
        .iter()
        .find(|q| q.corners == ["AA", "AAB", "AA", "ABA"].map(k))
        .unwrap();
    assert!(first.top().is_identity());
    assert!(!first.bottom().is_identity());
    assert_eq!(first.bottom().level, 1);
}

#[test]
fn ladder_strip_and_pasting() {
    let g = induced();
    let strip = ladder_squares(&g);
    assert_eq!(strip.len(), 6);
    let cell = paste_vertical(&strip).unwrap();
    assert!(cell.top.is_identity() && cell.bottom.is_identity());
    assert_eq!(cell.top.from, k("AA"));
    assert_eq!(cell.bottom.to, k("ABBBABBB"));
    assert_eq!(PastedCell::path_states(&cell.left), RED.map(String::from).to_vec());
    assert_eq!(PastedCell::path_states(&cell.right), YELLOW.map(String::from).to_vec());
    let mut reversed = strip.clone();
    reversed.swap(0, 1);
    assert!(matches!(paste_vertical(&reversed), Err(Error::NotComposable(_))));
    assert!(paste_vertical(&[]).is_err());
}

#[test]
fn squares_have_their_edges() {
    let g = induced();
    let has = |a: &StateKey, b: &StateKey, level: u32| {
        a == b
            || g.events
                .iter()
                .any(|e| &e.source == a && &e.target == b && e.level == level)
    };
    let squares = find_squares(&g);
    assert!(!squares.is_empty());
    for q in &squares {
        let [a, b, c, d] = &q.corners;
        assert!(has(a, b, 0) && has(c, d, 0) && has(a, c, 1) && has(b, d, 1));
        assert!(!(q.vertical[0].is_identity() && q.vertical[1].is_identity()));
        assert!(!(q.horizontal[0].is_identity() && q.horizontal[1].is_identity()));
    }
}

#[test]
fn no_squares_without_homotopy_edges() {
    assert!(find_squares(&base_graph(6)).is_empty());
}

#[test]
fn ladder_is_closed() {
    let report = check_composition_closure(&induced().restrict(&ladder_keys()), 2);
    assert!(report.is_closed(), "{:?}", report.violations);
    assert!(report.cells_checked >= 6);
    let report = check_composition_closure(&induced(), 2);
    assert!(report.is_closed(), "{:?}", report.violations);
}

#[test]
fn empty_graph_is_closed() {
    let g = MultiwayGraph::empty(Substrate::String);
    for dim in 1..=3 {
        let r = check_composition_closure(&g, dim);
        assert!(r.is_closed());
        assert_eq!(r.cells_checked, 0);
    }
}

#[test]
fn deleting_the_middle_rung_is_reported() {
    let mut g = induced().restrict(&ladder_keys());
    g.events.retain(|e| !(e.source == k("AABBB") && e.level == 1));
    for (i, e) in g.events.iter_mut().enumerate() {
        e.id = EventId(i);
    }
    let report = check_composition_closure(&g, 2);
    assert!(!report.is_closed());
    assert!(report.violations.iter().any(|v| v.contains("AABB -> ABBA")));
}

fn tower_graph() -> MultiwayGraph {
    let mut rules = vec![Rule::string("r", "A", "AB")];
    rules.extend(whole_rules(&LEVEL1, 1));
    rules.extend(whole_rules(&LEVEL2, 2));
    evolve(&[s("AA")], &rules, 9).unwrap()
}

#[test]
fn cube_count_matches_the_oracle() {
    let pinned: usize = include_str!("../../tests/fixtures/cube_count.txt")
        .trim()
        .parse()
        .unwrap();
    let cubes = find_cubes(&tower_graph());
    assert_eq!(cubes.len(), pinned);
    let corner = ["AA", "ABABBB", "AA", "ABBBAB", "ABAB", "ABABBB", "ABAB", "ABBBAB"].map(k);
    assert!(cubes.iter().any(|c| c.corners == corner));
}

#[test]
fn cube_sides_and_faces() {
    for c in find_cubes(&tower_graph()) {
        assert_eq!(c.sides.len(), 12);
        for axis in 0..3 {
            let sides = &c.sides[axis * 4..axis * 4 + 4];
            assert!(sides.iter().all(|x| x.level == axis as u32));
            assert!(sides.iter().any(|x| !x.is_identity()));
        }
        for f in c.faces() {
            assert_eq!(f.vertical[0].from, f.corners[0]);
            assert_eq!(f.horizontal[1].to, f.corners[3]);
        }
    }
}

#[test]
fn height_one_tower_has_no_cubes() {
    assert!(find_cubes(&induced()).is_empty());
}

#[test]
fn seeded_cube_is_found_once() {
    let name = |i: usize| ((b'a' + i as u8) as char).to_string().to_uppercase();
    let mut rules = Vec::new();
    for axis in 0..3 {
        for i in (0..8).filter(|i| i & (1 << axis) == 0) {
            let (l, r) = (name(i), name(i | 1 << axis));
            rules.push(
                Rule::whole(format!("e{i}.{axis}"), s(&l), s(&r))
                    .unwrap()
                    .with_level(axis as u32),
            );
        }
    }
    let g = evolve(&[s("A")], &rules, 3).unwrap();
    assert_eq!(g.events.len(), 12);
    let cubes = find_cubes(&g);
    assert_eq!(cubes.len(), 1);
    assert_eq!(cubes[0].corners, std::array::from_fn(|i| k(&name(i))));
    assert_eq!(find_cubes_with(&g, CellMode::Elementary, [0, 1, 2]).len(), 1);
    assert!(check_composition_closure(&g, 3).is_closed());
}

#[test]
fn inverses_give_reverse_edges() {
    let mut rules = vec![Rule::string("r", "A", "AB")];
    rules.extend(whole_rules(&LEVEL1, 1));
    rules.extend(whole_rules(&LEVEL2, 2));
    let steps = 5;
    let g = evolve(&[s("AA")], &add_inverses(&rules).unwrap(), steps).unwrap();
    for e in &g.events {
        if (g.states[&e.target].generation as usize) < steps {
            assert!(
                g.events
                    .iter()
                    .any(|r| r.source == e.target && r.target == e.source && r.level == e.level),
                "{} -> {} has no reverse",
                e.source,
                e.target
            );
        }
    }
}

#[test]
fn tower_levels() {
    let mut t = RuleTower::new(vec![Rule::string("r", "A", "AB")]);
    assert_eq!(t.height(), 0);
    t.extend(whole_rules(&LEVEL1, 1));
    assert_eq!(t.height(), 1);
    assert_eq!(t.level(1).len(), 5);
    t.extend(whole_rules(&LEVEL2, 2));
    assert_eq!(t.height(), 2);
    assert_eq!(t.up_to(1).len(), 6);
    assert_eq!(t.all().len(), 10);
    assert_eq!(RuleTower::from_rules(t.all()), t);
}
