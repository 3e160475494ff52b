use std::collections::{BTreeSet, HashSet, VecDeque};

use proptest::prelude::{proptest, ProptestConfig};
use proptest::prop_assert_eq;

use super::theory::rename_canonical;
use super::*;
use crate::rewrite::Substrate;
use crate::term::{group_axioms, Term};

fn s(text: &str) -> State {
    State::parse(Substrate::String, text).unwrap()
}

fn shortlex_ab() -> ReductionOrdering {
    ReductionOrdering::Strings(StringOrdering::shortlex("ab"))
}

fn rule_texts(rules: &[Rule]) -> BTreeSet<String> {
    rules
        .iter()
        .map(|r| format!("{} -> {}", r.lhs_text(), r.rhs_text()))
        .collect()
}

/// Leftmost-first normal form by plain substring search.
fn nf(mut w: String, rules: &[(String, String)]) -> String {
    'again: loop {
        for (l, r) in rules {
            if let Some(i) = w.find(l.as_str()) {
                w.replace_range(i..i + l.len(), r);
                continue 'again;
            }
        }
        return w;
    }
}

fn pairs_of_rules(rules: &[Rule]) -> Vec<(String, String)> {
    rules.iter().map(|r| (r.lhs_text(), r.rhs_text())).collect()
}

fn one_step(w: &str, rules: &[(String, String)]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (l, r) in rules {
        for i in 0..=w.len().saturating_sub(l.len()) {
            if w[i..].starts_with(l.as_str()) {
                out.insert(format!("{}{}{}", &w[..i], r, &w[i + l.len()..]));
            }
        }
    }
    out
}

fn all_words(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| ['a', 'b'].map(|c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn self_overlap_of_aba() {
    let pairs = critical_pairs(&[Rule::string("r", "aba", "b")]).unwrap();
    assert_eq!(pairs.len(), 1);
    let p = &pairs[0];
    assert_eq!(
        (p.peak.to_string(), p.left.to_string(), p.right.to_string()),
        ("ababa".into(), "bba".into(), "abb".into())
    );
    assert_eq!(p.overlap, Overlap::Strings { offset: 2 });
    // brute force: among words of length 5 only ababa has overlapping redexes
    let rules = vec![("aba".to_string(), "b".to_string())];
    let peaks: Vec<String> = all_words(5)
        .into_iter()
        .filter(|w| w.len() == 5)
        .filter(|w| {
            let starts: Vec<usize> = (0..3).filter(|&i| &w[i..i + 3] == "aba").collect();
            starts.windows(2).any(|x| x[1] - x[0] < 3)
        })
        .collect();
    assert_eq!(peaks, vec!["ababa".to_string()]);
    let results = one_step("ababa", &rules);
    assert_eq!(results, BTreeSet::from(["bba".to_string(), "abb".to_string()]));
}

#[test]
fn trivial_and_empty_pair_sets() {
    let rules = [Rule::string("r", "aa", "a")];
    let pairs = critical_pairs(&rules).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].peak.to_string(), "aaa");
    assert_eq!(pairs[0].left, pairs[0].right);
    assert!(joinable(&pairs[0], &rules, 0).unwrap());
    let disjoint = [Rule::string("r1", "a", "b"), Rule::string("r2", "c", "d")];
    assert!(critical_pairs(&disjoint).unwrap().is_empty());
}

#[test]
fn containment_overlaps() {
    let rules = [Rule::string("r1", "abc", "x"), Rule::string("r2", "b", "y")];
    let pairs = critical_pairs(&rules).unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(
        (pairs[0].left.to_string(), pairs[0].right.to_string()),
        ("x".into(), "ayc".into())
    );
    assert_eq!(pairs[0].overlap, Overlap::Strings { offset: 1 });
}

#[test]
fn pair_sides_are_one_step_rewrites() {
    let sets = [
        vec![Rule::string("r", "aba", "b"), Rule::string("q", "bba", "abb")],
        vec![Rule::string("r", "aab", "b"), Rule::string("q", "ba", "a")],
    ];
    for rules in &sets {
        for p in critical_pairs(rules).unwrap() {
            let next: HashSet<StateKey> = successors(&p.peak, rules)
                .unwrap()
                .into_iter()
                .map(|(_, t)| t.key())
                .collect();
            assert!(next.contains(&p.left.key()) && next.contains(&p.right.key()));
        }
    }
    let axioms = group_axioms();
    let pairs = critical_pairs(&axioms).unwrap();
    assert!(!pairs.is_empty());
    for p in pairs {
        let next: HashSet<StateKey> = successors(&p.peak, &axioms)
            .unwrap()
            .into_iter()
            .map(|(_, t)| t.key())
            .collect();
        assert!(next.contains(&p.left.key()), "{} -> {}", p.peak, p.left);
        assert!(next.contains(&p.right.key()), "{} -> {}", p.peak, p.right);
    }
}

#[test]
fn joinability_before_and_after() {
    let base = [Rule::string("r", "aba", "b")];
    let p = critical_pairs(&base).unwrap().remove(0);
    assert!(!joinable(&p, &base, 6).unwrap());
    let extended = [base[0].clone(), Rule::string("q", "bba", "abb")];
    assert!(joinable(&p, &extended, 1).unwrap());
}

#[test]
fn completes_aba_to_the_oracle_system() {
    let pinned: BTreeSet<String> = include_str!("../../tests/fixtures/kb_aba.txt")
        .lines()
        .map(String::from)
        .collect();
    let done = knuth_bendix(&[Rule::string("r", "aba", "b")], shortlex_ab(), 20, 10).unwrap();
    assert_eq!(rule_texts(&done.rules), pinned);
    assert_eq!(
        done.provenance[1].origin,
        Origin::CriticalPair {
            outer: "r".into(),
            inner: "r".into(),
            peak: "ababa".into()
        }
    );
    assert!(done.trace[0].contains("bba -> abb"));
}

#[test]
fn completed_aba_is_locally_confluent_on_all_short_words() {
    let done = knuth_bendix(&[Rule::string("r", "aba", "b")], shortlex_ab(), 20, 10).unwrap();
    let rules = pairs_of_rules(&done.rules);
    for w in all_words(8) {
        let forms: BTreeSet<String> = one_step(&w, &rules).into_iter().map(|x| nf(x, &rules)).collect();
        assert!(forms.len() <= 1, "{w} diverges into {forms:?}");
    }
}

/// Words reachable from `w` by forward and backward steps, length-bounded.
fn component(w: &str, rules: &[(String, String)], max_len: usize) -> HashSet<String> {
    let both: Vec<(String, String)> = rules
        .iter()
        .flat_map(|(l, r)| [(l.clone(), r.clone()), (r.clone(), l.clone())])
        .filter(|(l, _)| !l.is_empty())
        .collect();
    let mut seen = HashSet::from([w.to_string()]);
    let mut queue = VecDeque::from([w.to_string()]);
    while let Some(x) = queue.pop_front() {
        for y in one_step(&x, &both) {
            if y.len() <= max_len && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

#[test]
fn completion_is_sound_and_preserves_equivalence() {
    let original = vec![("aba".to_string(), "b".to_string())];
    let done = knuth_bendix(&[Rule::string("r", "aba", "b")], shortlex_ab(), 20, 10).unwrap();
    let completed = pairs_of_rules(&done.rules);
    for (l, r) in &completed {
        assert!(component(l, &original, 7).contains(r), "{l} -> {r} not derivable");
    }
    for w in all_words(5) {
        let n = nf(w.clone(), &completed);
        for x in component(&w, &original, 7) {
            assert_eq!(nf(x, &completed), n);
        }
    }
}

#[test]
fn confluent_input_is_unchanged() {
    let rules = [Rule::string("r", "aa", "a")];
    let done = knuth_bendix(&rules, shortlex_ab(), 20, 10).unwrap();
    assert_eq!(done.rules, rules.to_vec());
    assert!(done.trace.is_empty());
}

#[test]
fn unorientable_transposition() {
    let err = knuth_bendix(&[Rule::string("r", "ab", "ba")], shortlex_ab(), 20, 10).unwrap_err();
    assert_eq!(
        err,
        Error::OrderFailure {
            lhs: "ab".into(),
            rhs: "ba".into()
        }
    );
    assert!(knuth_bendix(&[Rule::string("r", "ba", "ab")], shortlex_ab(), 20, 10).is_ok());
}

#[test]
fn caps_report_divergence() {
    let rules = [Rule::string("r", "aba", "b")];
    assert!(matches!(
        knuth_bendix(&rules, shortlex_ab(), 20, 1),
        Err(Error::Diverged { .. })
    ));
    assert!(matches!(
        knuth_bendix(&rules, shortlex_ab(), 1, 10),
        Err(Error::Diverged { .. })
    ));
}

#[test]
fn hypergraphs_are_unsupported() {
    let rules = [Rule::hypergraph("h", "{{x,y}}", "{{x,y},{y,z}}").unwrap()];
    assert_eq!(
        critical_pairs(&rules),
        Err(Error::SubstrateUnsupported(Substrate::Hypergraph))
    );
    assert_eq!(
        knuth_bendix(&rules, shortlex_ab(), 10, 10).unwrap_err(),
        Error::SubstrateUnsupported(Substrate::Hypergraph)
    );
}

#[test]
fn naive_mode_also_completes() {
    let config = CompletionConfig {
        interreduce: false,
        ..CompletionConfig::new(shortlex_ab())
    };
    let done = knuth_bendix_with(&[Rule::string("r", "aba", "b")], &config).unwrap();
    let rules = pairs_of_rules(&done.rules);
    for w in all_words(7) {
        let forms: BTreeSet<String> = one_step(&w, &rules).into_iter().map(|x| nf(x, &rules)).collect();
        assert!(forms.len() <= 1);
    }
}

fn canonical_rule_text(l: &Term, r: &Term) -> String {
    let v = rename_canonical(&[l, r]);
    format!("{} -> {}", v[0], v[1])
}

#[test]
fn group_axioms_complete_to_the_ten_rule_system() {
    let ordering = ReductionOrdering::Terms(TermOrdering::lpo(&["inv", "g", "e"]));
    let done = knuth_bendix(&group_axioms(), ordering, 60, 30).unwrap();
    let got: BTreeSet<String> = done
        .rules
        .iter()
        .map(|r| match &r.body {
            crate::rewrite::RuleBody::Term(t) => canonical_rule_text(&t.lhs, &t.rhs),
            _ => unreachable!(),
        })
        .collect();
    let vars = ["x", "y", "z"];
    let want: BTreeSet<String> = [
        ("g[e, x]", "x"),
        ("g[x, e]", "x"),
        ("g[inv[x], x]", "e"),
        ("g[x, inv[x]]", "e"),
        ("g[g[x, y], z]", "g[x, g[y, z]]"),
        ("g[inv[x], g[x, y]]", "y"),
        ("g[x, g[inv[x], y]]", "y"),
        ("inv[e]", "e"),
        ("inv[inv[x]]", "x"),
        ("inv[g[x, y]]", "g[inv[y], inv[x]]"),
    ]
    .iter()
    .map(|(l, r)| {
        let rule = Rule::term("t", l, r, &vars).unwrap();
        match rule.body {
            crate::rewrite::RuleBody::Term(t) => canonical_rule_text(&t.lhs, &t.rhs),
            _ => unreachable!(),
        }
    })
    .collect();
    assert_eq!(got, want);
}

#[test]
fn observer_reports_both_runs() {
    let config = CompletionConfig::new(shortlex_ab());
    let report = observe(&[s("abababa")], &[Rule::string("r", "aba", "b")], &config, 4, 2).unwrap();
    assert_eq!(report.completion.rules.len(), 2);
    assert!(!report.before.is_empty() && !report.after.is_empty());
    assert_eq!(report.before[0].states, 1);
    let total = |v: &[SliceSize]| v.iter().map(|x| x.states).sum::<usize>();
    assert!(total(&report.after) >= total(&report.before));
}

fn word(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { 'b' } else { 'a' }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_peaks_are_locally_confluent(bits in proptest::collection::vec(proptest::bool::ANY, 0..=8)) {
        let done = knuth_bendix(&[Rule::string("r", "aba", "b")], shortlex_ab(), 20, 10).unwrap();
        let rules = pairs_of_rules(&done.rules);
        let forms: BTreeSet<String> = one_step(&word(&bits), &rules).into_iter().map(|x| nf(x, &rules)).collect();
        prop_assert_eq!(forms.len().min(1), forms.len());
    }
}
