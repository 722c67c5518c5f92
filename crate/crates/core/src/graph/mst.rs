use super::{Edge, Graph};
use crate::error::GraphError;

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Kruskal's algorithm on the subgraph induced by `on`. Ties are broken by
/// endpoint indices, so the result is deterministic.
pub fn minimum_spanning_tree(g: &Graph, on: &[usize]) -> Result<Vec<Edge>, GraphError> {
    let mut inside = vec![false; g.n()];
    for &v in on {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        inside[v] = true;
    }
    let k = inside.iter().filter(|&&b| b).count();
    let mut candidates: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| inside[e.u] && inside[e.v] && e.weight.is_finite())
        .copied()
        .collect();
    candidates.sort_by(|a, b| {
        a.weight
            .total_cmp(&b.weight)
            .then_with(|| a.key().cmp(&b.key()))
    });
    let mut sets = DisjointSets::new(g.n());
    let mut tree = Vec::with_capacity(k.saturating_sub(1));
    for e in candidates {
        if sets.union(e.u, e.v) {
            tree.push(e);
        }
    }
    if tree.len() + 1 < k {
        return Err(GraphError::SubsetDisconnected);
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CostMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_subsets() {
        let g = Graph::from_matrix(&CostMatrix::from_points(&[(0.0, 0.0), (1.0, 0.0)]));
        assert!(minimum_spanning_tree(&g, &[1]).unwrap().is_empty());
        let t = minimum_spanning_tree(&g, &[0, 1]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].key(), (0, 1));
    }

    #[test]
    fn disconnected_subset() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        assert_eq!(
            minimum_spanning_tree(&g, &[0, 1, 2]),
            Err(GraphError::SubsetDisconnected)
        );
    }

    /// All spanning trees of K_n via Prüfer sequences.
    fn enumerate_min(costs: &CostMatrix) -> f64 {
        let n = costs.n();
        let mut best = f64::INFINITY;
        let total = n.pow((n - 2) as u32);
        for code in 0..total {
            let mut seq = Vec::with_capacity(n - 2);
            let mut c = code;
            for _ in 0..n - 2 {
                seq.push(c % n);
                c /= n;
            }
            let mut degree = vec![1usize; n];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut w = 0.0;
            for &s in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
                w += costs.get(leaf, s);
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
            w += costs.get(rest[0], rest[1]);
            best = best.min(w);
        }
        best
    }

    #[test]
    fn matches_spanning_tree_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..7)
                .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            let costs = CostMatrix::from_points(&pts);
            let g = Graph::from_matrix(&costs);
            let all: Vec<usize> = (0..7).collect();
            let tree = minimum_spanning_tree(&g, &all).unwrap();
            let w: f64 = tree.iter().map(|e| e.weight).sum();
            assert!((w - enumerate_min(&costs)).abs() < 1e-9);

            // cut property: each tree edge is lightest across the cut it defines
            for (i, e) in tree.iter().enumerate() {
                let mut sets = DisjointSets::new(7);
                for (k, f) in tree.iter().enumerate() {
                    if k != i {
                        sets.union(f.u, f.v);
                    }
                }
                let side_root = sets.find(e.u);
                for f in g.edges() {
                    let crosses = (sets.find(f.u) == side_root) != (sets.find(f.v) == side_root);
                    if crosses {
                        assert!(e.weight <= f.weight + 1e-12);
                    }
                }
            }
        }
    }
}
