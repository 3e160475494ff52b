use std::collections::BTreeSet;

use super::*;
use crate::rewrite::successors;
use crate::rewrite::{apply_match, enumerate_matches};
use proptest::prelude::{prop, proptest, ProptestConfig, Strategy as _, TestCaseError};
use proptest::prop_assert;
use proptest::prop_assert_eq;

fn s(text: &str) -> State {
    State::parse(Substrate::String, text).unwrap()
}

fn h(text: &str) -> State {
    State::parse(Substrate::Hypergraph, text).unwrap()
}

fn ab() -> Vec<Rule> {
    vec![Rule::string("r", "A", "AB")]
}

fn fig2() -> Vec<Rule> {
    vec![Rule::hypergraph("r", "{{x,y},{y,z}}", "{{w,y},{y,z},{z,w},{x,w}}").unwrap()]
}

fn keys(g: &MultiwayGraph, gen: u32) -> BTreeSet<String> {
    g.states_at_generation(gen).into_iter().map(|k| k.to_string()).collect()
}

#[test]
fn successors_examples() {
    let succ = successors(&s("AA"), &ab()).unwrap();
    let texts: Vec<String> = succ.iter().map(|(_, t)| t.to_string()).collect();
    assert_eq!(texts, vec!["ABA", "AAB"]);
    assert!(successors(&s("B"), &ab()).unwrap().is_empty());
    assert_eq!(
        successors(&s("A"), &fig2()).unwrap_err(),
        Error::SubstrateMismatch {
            expected: Substrate::String,
            found: Substrate::Hypergraph
        }
    );
}

#[test]
fn successors_replay_and_token_accounting() {
    let st = h("{{0,0},{0,0}}");
    let succ = successors(&st, &fig2()).unwrap();
    let matches = enumerate_matches(&st, &fig2()).unwrap();
    for ((e, t), m) in succ.iter().zip(&matches) {
        let mut minter = TokenMinter::after(&st);
        let (replayed, _) = apply_match(&st, &fig2(), m, &mut minter).unwrap();
        assert_eq!(replayed.key(), t.key());
        assert_eq!(
            t.tokens().len(),
            st.tokens().len() - e.consumed.len() + e.produced.len()
        );
        assert!(e.consumed.iter().all(|c| !e.produced.contains(c)));
    }
    let targets: BTreeSet<String> = succ.iter().map(|(e, _)| e.target.to_string()).collect();
    assert_eq!(targets.len(), 1);
}

#[test]
fn string_generation_counts() {
    let g = evolve(&[s("AA")], &ab(), 3).unwrap();
    assert_eq!(g.generation_counts(), vec![1, 2, 3, 4]);
    let g0 = evolve(&[s("AA")], &ab(), 0).unwrap();
    assert_eq!(g0.states.len(), 1);
    assert!(g0.events.is_empty());
}

/// Independent oracle: plain BFS over `String`s with `str::replace_range`.
fn bfs_oracle(init: &str, steps: usize) -> Vec<BTreeSet<String>> {
    let mut seen: BTreeSet<String> = [init.to_string()].into();
    let mut layers = vec![seen.clone()];
    for _ in 0..steps {
        let mut next = BTreeSet::new();
        for w in layers.last().unwrap() {
            for (i, c) in w.char_indices() {
                if c == 'A' {
                    let mut v = w.clone();
                    v.replace_range(i..i + 1, "AB");
                    if seen.insert(v.clone()) {
                        next.insert(v);
                    }
                }
            }
        }
        layers.push(next);
    }
    layers
}

#[test]
fn string_layers_match_oracle_and_closed_form() {
    let g = evolve(&[s("AA")], &ab(), 8).unwrap();
    let oracle = bfs_oracle("AA", 8);
    for n in 0..=8u32 {
        let layer = keys(&g, n);
        assert_eq!(layer, oracle[n as usize]);
        let closed: BTreeSet<String> = (0..=n as usize)
            .map(|i| format!("A{}A{}", "B".repeat(i), "B".repeat(n as usize - i)))
            .collect();
        assert_eq!(layer, closed);
    }
}

#[test]
fn hypergraph_one_step() {
    let g = evolve(&[h("{{0,0},{0,0}}")], &fig2(), 1).unwrap();
    assert_eq!(g.states.len(), 2);
    // two edge-injective matches, both landing on the same canonical state
    assert_eq!(g.events.len(), 2);
    let target = &g.events[0].target;
    assert!(g.events.iter().all(|e| &e.target == target));
    match g.state(target).unwrap() {
        State::Hypergraph(hg) => assert_eq!(hg.edges.len(), 4),
        _ => unreachable!(),
    }
}

#[test]
fn evolution_is_thread_independent() {
    let base = evolve_with(
        &[h("{{0,0},{0,0}}")],
        &fig2(),
        &EvolveConfig {
            steps: 3,
            threads: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    for threads in [2, 8] {
        let g = evolve_with(
            &[h("{{0,0},{0,0}}")],
            &fig2(),
            &EvolveConfig {
                steps: 3,
                threads: Some(threads),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g, base);
    }
}

#[test]
fn state_cap() {
    let err = evolve_with(
        &[s("AA")],
        &ab(),
        &EvolveConfig {
            steps: 5,
            max_states: Some(4),
            ..Default::default()
        },
    )
    .unwrap_err();
    assert_eq!(err, Error::FrontierLimitExceeded(4));
}

#[test]
fn produced_tokens_are_globally_unique() {
    let g = evolve(&[s("AA")], &ab(), 5).unwrap();
    let mut seen = BTreeSet::new();
    for e in &g.events {
        for t in &e.produced {
            assert!(seen.insert(*t));
        }
        let stored = g.state(&e.target).unwrap();
        assert!(e.produced_at_target.iter().all(|t| stored.tokens().contains(t)));
        let source = g.state(&e.source).unwrap();
        assert!(e.consumed.iter().all(|t| source.tokens().contains(t)));
    }
}

#[test]
fn foliation_examples() {
    let g = evolve(&[s("AA")], &ab(), 3).unwrap();
    let f = foliate(&g).unwrap();
    assert_eq!(f.slices.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    assert!(f.is_valid_for(&g));
    let single = evolve(&[s("B")], &ab(), 3).unwrap();
    assert_eq!(foliate(&single).unwrap().slices.len(), 1);

    let diamond = vec![
        Rule::string("ab", "a", "b"),
        Rule::string("ac", "a", "c"),
        Rule::string("bd", "b", "d"),
        Rule::string("cd", "c", "d"),
    ];
    let g = evolve(&[s("a")], &diamond, 3).unwrap();
    let f = foliate(&g).unwrap();
    let names: Vec<Vec<String>> = f
        .slices
        .iter()
        .map(|sl| sl.iter().map(|k| k.to_string()).collect())
        .collect();
    assert_eq!(names, vec![vec!["a"], vec!["b", "c"], vec!["d"]]);

    let cyclic = evolve(
        &[s("A")],
        &[Rule::string("f", "A", "B"), Rule::string("b", "B", "A")],
        3,
    )
    .unwrap();
    assert_eq!(foliate(&cyclic).unwrap_err(), Error::CyclicGraph);
}

#[test]
fn longest_path_time_after_merge() {
    // a -> b -> c and a -> c: c sits at time 2
    let rules = vec![
        Rule::string("1", "a", "b"),
        Rule::string("2", "b", "c"),
        Rule::string("3", "a", "c"),
    ];
    let g = evolve(&[s("a")], &rules, 2).unwrap();
    let f = foliate(&g).unwrap();
    assert_eq!(f.time_of(&"c".into()), Some(2));
    assert_eq!(g.states[&StateKey::from("c")].generation, 1);
}

#[test]
fn branchial_examples() {
    let g = evolve(&[s("AA")], &ab(), 3).unwrap();
    let f = foliate(&g).unwrap();
    let b1 = branchial_graph(&g, &f, 1, 1).unwrap();
    assert_eq!(b1.edges, vec![BranchialEdge { a: 0, b: 1, weight: 1 }]);
    assert!(branchial_graph(&g, &f, 0, 1).unwrap().edges.is_empty());
    let b2 = branchial_graph(&g, &f, 2, 1).unwrap();
    let named: BTreeSet<(String, String)> = b2
        .edges
        .iter()
        .map(|e| {
            let (x, y) = (b2.vertices[e.a].to_string(), b2.vertices[e.b].to_string());
            (x.clone().min(y.clone()), x.max(y))
        })
        .collect();
    let expected: BTreeSet<(String, String)> = [("ABAB", "ABBA"), ("AABB", "ABAB")]
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .into();
    assert_eq!(named, expected);
    // two steps back every pair shares AA
    let deep = branchial_graph(&g, &f, 2, 2).unwrap();
    assert_eq!(deep.edges.len(), 3);
}

#[test]
fn red_and_yellow_paths() {
    let g = evolve(&[s("AA")], &ab(), 6).unwrap();
    let paths = paths_between(&g, &"AA".into(), &"ABBBABBB".into(), usize::MAX, 6).unwrap();
    let as_text: Vec<Vec<String>> = paths
        .iter()
        .map(|p| p.states.iter().map(|k| k.to_string()).collect())
        .collect();
    let red: Vec<String> = ["AA", "AAB", "AABB", "AABBB", "ABABBB", "ABBABBB", "ABBBABBB"]
        .map(String::from)
        .to_vec();
    let yellow: Vec<String> = ["AA", "ABA", "ABBA", "ABBBA", "ABBBAB", "ABBBABB", "ABBBABBB"]
        .map(String::from)
        .to_vec();
    assert!(as_text.contains(&red));
    assert!(as_text.contains(&yellow));
    // number of monotone lattice paths from (0,0) to (3,3)
    assert_eq!(paths.len(), 20);
    let ids: Vec<Vec<EventId>> = paths.iter().map(|p| p.events.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    let same = paths_between(&g, &"AA".into(), &"AA".into(), 10, 6).unwrap();
    assert_eq!(same.len(), 1);
    assert!(same[0].is_empty());
    assert!(paths_between(&g, &"AAB".into(), &"ABA".into(), 10, 6)
        .unwrap()
        .is_empty());
    assert!(matches!(
        paths_between(&g, &"Q".into(), &"AA".into(), 10, 6),
        Err(Error::KeyNotFound(_))
    ));
}

#[test]
fn singleway_first_match() {
    let hist = singleway_evolve(&s("AA"), &ab(), 3, Strategy::FirstMatch).unwrap();
    let texts: Vec<String> = hist.iter().map(|(st, _)| st.to_string()).collect();
    assert_eq!(texts, vec!["AA", "ABA", "ABBA", "ABBBA"]);
    assert!(hist[0].1.is_empty());
    let halted = singleway_evolve(&s("B"), &ab(), 3, Strategy::FirstMatch).unwrap();
    assert_eq!(halted.len(), 1);
}

#[test]
fn singleway_non_overlapping_hypergraph() {
    let hist = singleway_evolve(&h("{{0,0},{0,0}}"), &fig2(), 4, Strategy::AllNonOverlapping(7)).unwrap();
    let State::Hypergraph(after) = &hist[1].0 else {
        unreachable!()
    };
    assert_eq!(after.edges.len(), 4);
    for w in hist.windows(2) {
        let (before, after) = (w[0].0.tokens().len(), w[1].0.tokens().len());
        assert_eq!(after, before + 2 * w[1].1.len());
    }
    let again = singleway_evolve(&h("{{0,0},{0,0}}"), &fig2(), 4, Strategy::AllNonOverlapping(7)).unwrap();
    assert_eq!(hist, again);
}

#[test]
fn singleway_non_overlapping_strings() {
    let hist = singleway_evolve(&s("AAA"), &ab(), 1, Strategy::AllNonOverlapping(1)).unwrap();
    assert_eq!(hist[1].0.to_string(), "ABABAB");
    assert_eq!(hist[1].1.len(), 3);
}

fn arb_rules() -> impl proptest::strategy::Strategy<Value = Vec<Rule>> {
    let side = "[AB]{1,3}";
    prop::collection::vec((side, "[AB]{0,3}"), 1..3).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (l, r))| Rule::string(format!("r{i}"), &l, &r))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolve_invariants(rules in arb_rules(), init in "[AB]{1,4}") {
        let g = match evolve_with(&[s(&init)], &rules, &EvolveConfig { steps: 3, max_states: Some(400), ..Default::default() }) {
            Ok(g) => g,
            Err(Error::FrontierLimitExceeded(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        // merging: keys unique and equal to the stored state's key
        for (k, e) in &g.states {
            prop_assert_eq!(k, &e.state.key());
        }
        for e in &g.events {
            let src = g.state(&e.source).unwrap();
            let tgt = g.state(&e.target).unwrap();
            prop_assert_eq!(tgt.tokens().len(), src.tokens().len() - e.consumed.len() + e.produced.len());
        }
        if let Ok(f) = foliate(&g) {
            prop_assert!(f.is_valid_for(&g));
            let total: usize = f.slices.iter().map(Vec::len).sum();
            prop_assert_eq!(total, g.states.len());
            for i in 0..f.slices.len() {
                let b = branchial_graph(&g, &f, i, 1).unwrap();
                for e in &b.edges {
                    prop_assert_eq!(f.time_of(&b.vertices[e.a]), Some(i));
                    prop_assert_eq!(f.time_of(&b.vertices[e.b]), Some(i));
                }
            }
        }
        let par = evolve_with(&[s(&init)], &rules, &EvolveConfig { steps: 3, max_states: Some(400), threads: Some(4) }).unwrap();
        prop_assert_eq!(par, g);
    }
}
