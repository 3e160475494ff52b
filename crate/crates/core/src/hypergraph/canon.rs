//! Exact canonical labeling of vertex-colored ordered hypergraphs by
//! partition refinement and individualization, keeping the lexicographically
//! smallest relabeled edge list over all leaves of the search tree.
//! Automorphisms discovered at equal leaves prune sibling branches that lie
//! in the same orbit of the stabilizer of the current prefix.

/// Result of canonical labeling over dense vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Labeling {
    /// `labels[v]` is the canonical label of vertex `v`.
    pub labels: Vec<usize>,
    /// Relabeled edges, sorted.
    pub edges: Vec<Vec<usize>>,
    /// `order[k]` is the original index of the edge at canonical position `k`.
    pub order: Vec<usize>,
    /// Vertex colors listed by canonical label.
    pub colors: Vec<u64>,
}

struct Search<'a> {
    n: usize,
    edges: &'a [Vec<usize>],
    incidence: Vec<Vec<(usize, usize)>>,
    best: Option<(Vec<Vec<usize>>, Vec<usize>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut classes = usize::MAX;
        loop {
            let sigs: Vec<(usize, Vec<(usize, usize, Vec<usize>)>)> = (0..self.n)
                .map(|v| {
                    let mut inc: Vec<(usize, usize, Vec<usize>)> = self.incidence[v]
                        .iter()
                        .map(|&(e, pos)| {
                            let edge = &self.edges[e];
                            (edge.len(), pos, edge.iter().map(|&u| colors[u]).collect())
                        })
                        .collect();
                    inc.sort_unstable();
                    (colors[v], inc)
                })
                .collect();
            let mut distinct: Vec<&(usize, Vec<(usize, usize, Vec<usize>)>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| distinct.binary_search(&s).expect("signature present"))
                .collect();
            let count = distinct.len();
            colors = next;
            if count == classes {
                return colors;
            }
            classes = count;
        }
    }

    fn leaf(&mut self, labels: Vec<usize>) {
        let mut relabeled: Vec<(Vec<usize>, usize)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.iter().map(|&v| labels[v]).collect(), i))
            .collect();
        relabeled.sort();
        let (key, order): (Vec<Vec<usize>>, Vec<usize>) = relabeled.into_iter().unzip();
        match &self.best {
            Some((best_key, best_labels, _)) if *best_key == key => {
                // labels and best_labels give the same edge list: an automorphism
                let mut inverse = vec![0; self.n];
                for (v, &l) in best_labels.iter().enumerate() {
                    inverse[l] = v;
                }
                let gamma: Vec<usize> = labels.iter().map(|&l| inverse[l]).collect();
                if gamma.iter().enumerate().any(|(v, &g)| v != g) {
                    self.generators.push(gamma);
                }
            }
            Some((best_key, _, _)) if *best_key <= key => {}
            _ => self.best = Some((key, labels, order)),
        }
    }

    fn orbit_representatives(&self, prefix: &[usize], cell: &[usize]) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p] == p) {
                for v in 0..self.n {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, g[v]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        cell.iter().map(|&v| vec![find(&mut parent, v)]).collect()
    }

    fn run(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let colors = self.refine(colors);
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut by_color: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, &c) in colors.iter().enumerate() {
            by_color.entry(c).or_default().push(v);
        }
        cells.extend(by_color.into_values());
        let Some(target) = cells.iter().find(|c| c.len() > 1).cloned() else {
            self.leaf(colors);
            return;
        };
        let target_color = colors[target[0]];
        let mut explored_roots: Vec<usize> = Vec::new();
        for &v in &target {
            let roots = self.orbit_representatives(prefix, &target);
            let root_of = |x: usize| roots[target.iter().position(|&t| t == x).unwrap()][0];
            if explored_roots.contains(&root_of(v)) {
                continue;
            }
            explored_roots.push(root_of(v));
            let individualized: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + usize::from(c == target_color && u != v))
                .collect();
            prefix.push(v);
            self.run(individualized, prefix);
            prefix.pop();
            // orbits may have merged while exploring v; re-map explored roots
            let roots = self.orbit_representatives(prefix, &target);
            explored_roots = explored_roots
                .iter()
                .filter_map(|&r| target.iter().position(|&t| t == r).map(|i| roots[i][0]))
                .collect();
        }
    }
}

pub(crate) fn canonical_labeling(n: usize, edges: &[Vec<usize>], colors: &[u64]) -> Labeling {
    assert_eq!(colors.len(), n);
    let mut incidence = vec![Vec::new(); n];
    for (e, edge) in edges.iter().enumerate() {
        for (pos, &v) in edge.iter().enumerate() {
            incidence[v].push((e, pos));
        }
    }
    let mut search = Search {
        n,
        edges,
        incidence,
        best: None,
        generators: Vec::new(),
    };
    let mut palette: Vec<u64> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let initial: Vec<usize> = colors.iter().map(|c| palette.binary_search(c).unwrap()).collect();
    if n == 0 {
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i].clone());
        return Labeling {
            labels: Vec::new(),
            edges: order.iter().map(|&i| edges[i].clone()).collect(),
            order,
            colors: Vec::new(),
        };
    }
    search.run(initial, &mut Vec::new());
    let (edges, labels, order) = search.best.expect("at least one leaf");
    let mut by_label = vec![0u64; n];
    for (v, &l) in labels.iter().enumerate() {
        by_label[l] = colors[v];
    }
    Labeling {
        labels,
        edges,
        order,
        colors: by_label,
    }
}
