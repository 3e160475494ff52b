//! Causal networks: events linked when one consumes a token the other
//! produced, their overlay on the multiway graph, and a bounded test of
//! causal invariance across single-way histories.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::colored_certificate;
use crate::multiway::MultiwayGraph;
use crate::rewrite::{apply_match, enumerate_matches, Event, EventId, Rule, State, StateKey, TokenId, TokenMinter};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalEdge {
    pub from: EventId,
    pub to: EventId,
    /// Tokens produced by `from` and consumed by `to`.
    pub witness: Vec<TokenId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalNetwork {
    pub events: Vec<EventId>,
    /// Rule id of each event, parallel to `events`.
    pub rule_ids: Vec<String>,
    /// Sorted by `(from, to)`.
    pub edges: Vec<CausalEdge>,
}

pub fn build_causal_network(events: &[Event]) -> Result<CausalNetwork> {
    let mut producer: HashMap<TokenId, usize> = HashMap::new();
    for (i, e) in events.iter().enumerate() {
        for t in &e.produced {
            if producer.insert(*t, i).is_some() {
                return Err(Error::DuplicateTokenProduction(t.0));
            }
        }
    }
    let mut witnesses: BTreeMap<(usize, usize), Vec<TokenId>> = BTreeMap::new();
    for (b, e) in events.iter().enumerate() {
        for t in &e.consumed {
            if let Some(&a) = producer.get(t) {
                if a != b {
                    witnesses.entry((a, b)).or_default().push(*t);
                }
            }
        }
    }
    let mut edges: Vec<CausalEdge> = witnesses
        .into_iter()
        .map(|((a, b), mut witness)| {
            witness.sort_unstable();
            CausalEdge {
                from: events[a].id,
                to: events[b].id,
                witness,
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.from, e.to));
    Ok(CausalNetwork {
        events: events.iter().map(|e| e.id).collect(),
        rule_ids: events.iter().map(|e| e.rule_id.clone()).collect(),
        edges,
    })
}

impl CausalNetwork {
    fn index(&self) -> HashMap<EventId, usize> {
        self.events.iter().enumerate().map(|(i, e)| (*e, i)).collect()
    }

    /// Event indices in a topological order, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let ix = self.index();
        let n = self.events.len();
        let mut indegree = vec![0; n];
        let mut succ = vec![Vec::new(); n];
        for e in &self.edges {
            succ[ix[&e.from]].push(ix[&e.to]);
            indegree[ix[&e.to]] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Isomorphism certificate of the event DAG. With `labeled`, events
    /// must also agree on rule ids.
    pub fn certificate(&self, labeled: bool) -> Vec<u8> {
        let names: Vec<&String> = {
            let set: BTreeSet<&String> = self.rule_ids.iter().collect();
            set.into_iter().collect()
        };
        let colors: Vec<u64> = if labeled {
            self.rule_ids
                .iter()
                .map(|r| names.binary_search(&r).unwrap() as u64)
                .collect()
        } else {
            vec![0; self.events.len()]
        };
        let ix = self.index();
        let mut edges: Vec<Vec<usize>> = (0..self.events.len()).map(|i| vec![i]).collect();
        edges.extend(self.edges.iter().map(|e| vec![ix[&e.from], ix[&e.to]]));
        let mut cert = colored_certificate(&colors, &edges);
        if labeled {
            for n in names {
                cert.push(b'|');
                cert.extend_from_slice(n.as_bytes());
            }
        }
        cert
    }

    /// Edges not implied by longer paths.
    pub fn transitive_reduction(&self) -> CausalNetwork {
        let ix = self.index();
        let n = self.events.len();
        let mut succ = vec![Vec::new(); n];
        for e in &self.edges {
            succ[ix[&e.from]].push(ix[&e.to]);
        }
        let reach_avoiding = |from: usize, to: usize| {
            // is `to` reachable from `from` by a path of length >= 2
            let mut stack: Vec<usize> = succ[from].iter().copied().filter(|&s| s != to).collect();
            let mut seen = vec![false; n];
            while let Some(v) = stack.pop() {
                if v == to {
                    return true;
                }
                if !std::mem::replace(&mut seen[v], true) {
                    stack.extend(succ[v].iter().copied());
                }
            }
            false
        };
        CausalNetwork {
            events: self.events.clone(),
            rule_ids: self.rule_ids.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| !reach_avoiding(ix[&e.from], ix[&e.to]))
                .cloned()
                .collect(),
        }
    }
}

/// A vertex of the multiway causal overlay.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OverlayNode {
    State(StateKey),
    Event(EventId),
}

/// States and events of a multiway graph joined by evolution edges
/// (state to event to state), plus causal edges between events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwayCausalGraph {
    pub states: Vec<StateKey>,
    pub events: Vec<EventId>,
    pub evolution: Vec<(OverlayNode, OverlayNode)>,
    pub causal: Vec<CausalEdge>,
}

/// Event `b` depends on event `a` when `b` fires from the state `a`
/// produced and consumes one of the tokens `a` created there.
pub fn multiway_causal_graph(g: &MultiwayGraph) -> MultiwayCausalGraph {
    let mut evolution = Vec::with_capacity(2 * g.events.len());
    for e in &g.events {
        evolution.push((OverlayNode::State(e.source.clone()), OverlayNode::Event(e.id)));
        evolution.push((OverlayNode::Event(e.id), OverlayNode::State(e.target.clone())));
    }
    let mut by_source: HashMap<&StateKey, Vec<&Event>> = HashMap::new();
    for e in &g.events {
        by_source.entry(&e.source).or_default().push(e);
    }
    let mut causal = Vec::new();
    for a in &g.events {
        let produced: BTreeSet<TokenId> = a.produced_at_target.iter().copied().collect();
        for b in by_source.get(&a.target).into_iter().flatten() {
            let mut witness: Vec<TokenId> = b.consumed.iter().copied().filter(|t| produced.contains(t)).collect();
            if !witness.is_empty() {
                witness.sort_unstable();
                causal.push(CausalEdge {
                    from: a.id,
                    to: b.id,
                    witness,
                });
            }
        }
    }
    causal.sort_by_key(|e| (e.from, e.to));
    MultiwayCausalGraph {
        states: g.states.keys().cloned().collect(),
        events: g.events.iter().map(|e| e.id).collect(),
        evolution,
        causal,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// All enumerated histories have isomorphic causal networks.
    Invariant,
    NotInvariant,
    /// More histories than the cap; nothing is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalInvarianceReport {
    pub verdict: Verdict,
    pub depth: usize,
    pub labeled: bool,
    /// Histories enumerated (capped at `path_cap + 1` when inconclusive).
    pub paths: usize,
    pub distinct_certificates: usize,
    /// Two histories, as rule-id sequences, with different networks.
    pub witness: Option<(Vec<String>, Vec<String>)>,
}

/// Every maximal sequence of single rewrites of length at most `depth`.
fn histories(initial: &State, rules: &[Rule], depth: usize, cap: usize) -> Result<Option<Vec<Vec<Event>>>> {
    fn go(
        state: &State,
        rules: &[Rule],
        depth: usize,
        cap: usize,
        minter: &TokenMinter,
        trail: &mut Vec<Event>,
        out: &mut Vec<Vec<Event>>,
    ) -> Result<bool> {
        let matches = if trail.len() < depth {
            enumerate_matches(state, rules)?
        } else {
            Vec::new()
        };
        if matches.is_empty() {
            out.push(trail.clone());
            return Ok(out.len() <= cap);
        }
        for m in &matches {
            let mut minter = minter.clone();
            let (next, mut event) = apply_match(state, rules, m, &mut minter)?;
            event.id = EventId(trail.len());
            event.generation = trail.len() as u32 + 1;
            trail.push(event);
            let ok = go(&next, rules, depth, cap, &minter, trail, out)?;
            trail.pop();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
    let mut out = Vec::new();
    let ok = go(
        initial,
        rules,
        depth,
        cap,
        &TokenMinter::after(initial),
        &mut Vec::new(),
        &mut out,
    )?;
    Ok(ok.then_some(out))
}

/// Depth-bounded causal invariance: enumerate every maximal history of at
/// most `depth` events and compare the certificates of their causal
/// networks.
pub fn causal_invariance_verdict(
    initial: &State,
    rules: &[Rule],
    depth: usize,
    path_cap: usize,
    labeled: bool,
) -> Result<CausalInvarianceReport> {
    let Some(paths) = histories(initial, rules, depth, path_cap)? else {
        return Ok(CausalInvarianceReport {
            verdict: Verdict::Inconclusive,
            depth,
            labeled,
            paths: path_cap + 1,
            distinct_certificates: 0,
            witness: None,
        });
    };
    let certs: Vec<Vec<u8>> = paths
        .par_iter()
        .map(|p| build_causal_network(p).map(|n| n.certificate(labeled)))
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<&Vec<u8>> = certs.iter().collect();
    let witness = certs.iter().position(|c| *c != certs[0]).map(|i| {
        let names = |p: &Vec<Event>| p.iter().map(|e| e.rule_id.clone()).collect();
        (names(&paths[0]), names(&paths[i]))
    });
    Ok(CausalInvarianceReport {
        verdict: if distinct.len() <= 1 {
            Verdict::Invariant
        } else {
            Verdict::NotInvariant
        },
        depth,
        labeled,
        paths: paths.len(),
        distinct_certificates: distinct.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiway::{evolve, singleway_evolve, Strategy};
    use crate::rewrite::Substrate;

    fn s(text: &str) -> State {
        State::parse(Substrate::String, text).unwrap()
    }

    fn fig35() -> Vec<Rule> {
        vec![Rule::hypergraph("r", "{{x,y},{z,y}}", "{{x,w},{y,w},{z,w}}").unwrap()]
    }

    fn events_of(hist: &[(State, Vec<Event>)]) -> Vec<Event> {
        hist.iter().flat_map(|(_, e)| e.clone()).collect()
    }

    #[test]
    fn sequential_and_disjoint_events() {
        let rules = vec![Rule::string("r", "A", "AB")];
        let hist = singleway_evolve(&s("AA"), &rules, 3, Strategy::FirstMatch).unwrap();
        let net = build_causal_network(&events_of(&hist)).unwrap();
        // each step rewrites the leftmost A, which the previous step minted
        let pairs: Vec<(usize, usize)> = net.edges.iter().map(|e| (e.from.0, e.to.0)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        assert!(net.is_acyclic());

        let hist = singleway_evolve(&s("AA"), &[Rule::string("r", "A", "B")], 2, Strategy::FirstMatch).unwrap();
        let net = build_causal_network(&events_of(&hist)).unwrap();
        assert!(net.edges.is_empty());
    }

    /// Independent ledger replay: walk events in order, recording who
    /// produced each token.
    #[test]
    fn chain_matches_token_ledger() {
        let rules = vec![Rule::string("r", "A", "AB"), Rule::string("q", "BA", "AB")];
        let hist = singleway_evolve(&s("ABA"), &rules, 5, Strategy::FirstMatch).unwrap();
        let events = events_of(&hist);
        let mut ledger: HashMap<TokenId, EventId> = HashMap::new();
        let mut expected = BTreeSet::new();
        for e in &events {
            for t in &e.consumed {
                if let Some(p) = ledger.get(t) {
                    expected.insert((*p, e.id));
                }
            }
            for t in &e.produced {
                ledger.insert(*t, e.id);
            }
        }
        let net = build_causal_network(&events).unwrap();
        let got: BTreeSet<(EventId, EventId)> = net.edges.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn duplicate_production_rejected() {
        let rules = vec![Rule::string("r", "A", "AB")];
        let hist = singleway_evolve(&s("AA"), &rules, 1, Strategy::FirstMatch).unwrap();
        let mut events = events_of(&hist);
        let mut copy = events[0].clone();
        copy.id = EventId(9);
        events.push(copy);
        assert!(matches!(
            build_causal_network(&events),
            Err(Error::DuplicateTokenProduction(_))
        ));
    }

    #[test]
    fn overlay() {
        let rules = vec![Rule::string("r", "A", "AB")];
        let empty = evolve(&[], &rules, 2).unwrap();
        let o = multiway_causal_graph(&empty);
        assert!(o.events.is_empty() && o.causal.is_empty() && o.evolution.is_empty());

        let g = evolve(&[s("A")], &rules, 1).unwrap();
        let o = multiway_causal_graph(&g);
        assert_eq!(o.events.len(), 1);
        assert_eq!(o.evolution.len(), 2);
        assert!(o.causal.is_empty());

        let g = evolve(&[s("A")], &rules, 2).unwrap();
        let o = multiway_causal_graph(&g);
        assert_eq!(o.causal.len(), 1);

        let g = evolve(
            &[State::parse(Substrate::Hypergraph, "{{0,0},{0,0}}").unwrap()],
            &fig35(),
            2,
        )
        .unwrap();
        let o = multiway_causal_graph(&g);
        assert!(!o.causal.is_empty());
        for c in &o.causal {
            assert_eq!(g.event(c.from).target, g.event(c.to).source);
        }
    }

    #[test]
    fn trivial_causal_invariance() {
        let init = State::parse(Substrate::Hypergraph, "{{0,0},{0,0}}").unwrap();
        let r = causal_invariance_verdict(&init, &fig35(), 3, 10_000, true).unwrap();
        assert_eq!(r.verdict, Verdict::Invariant);
        assert!(r.paths >= 4);
    }

    #[test]
    fn single_path_is_invariant() {
        let r = causal_invariance_verdict(&s("A"), &[Rule::string("r", "A", "B")], 3, 10, true).unwrap();
        assert_eq!(r.verdict, Verdict::Invariant);
        assert_eq!(r.paths, 1);
    }

    #[test]
    fn pinned_non_invariant_witness() {
        let rules = vec![Rule::string("ab", "A", "B"), Rule::string("aac", "AA", "C")];
        for depth in [2, 3] {
            let r = causal_invariance_verdict(&s("AA"), &rules, depth, 100, true).unwrap();
            assert_eq!(r.verdict, Verdict::NotInvariant);
            assert_eq!(r.distinct_certificates, 2);
            let (a, b) = r.witness.unwrap();
            assert_ne!(a.len(), b.len());
        }
        // {A -> B, A -> C} from "A": unlabeled networks coincide, labeled ones do not
        let fork = vec![Rule::string("b", "A", "B"), Rule::string("c", "A", "C")];
        assert_eq!(
            causal_invariance_verdict(&s("A"), &fork, 1, 10, false).unwrap().verdict,
            Verdict::Invariant
        );
        assert_eq!(
            causal_invariance_verdict(&s("A"), &fork, 1, 10, true).unwrap().verdict,
            Verdict::NotInvariant
        );
    }

    #[test]
    fn cap_gives_inconclusive() {
        let init = State::parse(Substrate::Hypergraph, "{{0,0},{0,0}}").unwrap();
        let r = causal_invariance_verdict(&init, &fig35(), 3, 2, true).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn invariant_system_branches_merge() {
        let init = State::parse(Substrate::Hypergraph, "{{0,0},{0,0}}").unwrap();
        let g = evolve(&[init], &fig35(), 3).unwrap();
        let descendants = |k: &StateKey| {
            let mut seen: BTreeSet<StateKey> = [k.clone()].into();
            let mut stack = vec![k.clone()];
            while let Some(x) = stack.pop() {
                for e in g.events.iter().filter(|e| e.source == x) {
                    if seen.insert(e.target.clone()) {
                        stack.push(e.target.clone());
                    }
                }
            }
            seen
        };
        for a in &g.events {
            for b in g.events.iter().filter(|b| b.source == a.source && b.generation < 3) {
                assert!(!descendants(&a.target).is_disjoint(&descendants(&b.target)));
            }
        }
    }

    #[test]
    fn transitive_reduction_drops_implied_edges() {
        let net = CausalNetwork {
            events: vec![EventId(0), EventId(1), EventId(2)],
            rule_ids: vec!["r".into(); 3],
            edges: vec![
                CausalEdge {
                    from: EventId(0),
                    to: EventId(1),
                    witness: vec![TokenId(1)],
                },
                CausalEdge {
                    from: EventId(0),
                    to: EventId(2),
                    witness: vec![TokenId(2)],
                },
                CausalEdge {
                    from: EventId(1),
                    to: EventId(2),
                    witness: vec![TokenId(3)],
                },
            ],
        };
        assert_eq!(net.transitive_reduction().edges.len(), 2);
    }
}
