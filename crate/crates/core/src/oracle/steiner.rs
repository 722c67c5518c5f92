use crate::error::OracleError;
use crate::graph::{minimum_spanning_tree, CostMatrix, Edge, Graph};

pub const MAX_STEINER_VERTICES: usize = 7;

/// Optimal Steiner tree connecting `terminals` to `root`.
///
/// An optimal tree is a minimum spanning tree of the subgraph induced by its
/// own vertex set, so it suffices to try every set of extra vertices.
pub fn exact_steiner_tree(
    costs: &CostMatrix,
    root: usize,
    terminals: &[usize],
) -> Result<(f64, Vec<Edge>), OracleError> {
    let n = costs.n();
    if n > MAX_STEINER_VERTICES {
        return Err(OracleError::InstanceTooLarge {
            what: "vertices",
            size: n,
            limit: MAX_STEINER_VERTICES,
        });
    }
    let mut required = vec![false; n];
    required[root] = true;
    for &v in terminals {
        required[v] = true;
    }
    if required.iter().filter(|&&b| b).count() == 1 {
        return Ok((0.0, Vec::new()));
    }
    let optional: Vec<usize> = (0..n).filter(|&v| !required[v]).collect();
    let g = Graph::from_matrix(costs);
    let mut best: Option<(f64, Vec<Edge>)> = None;
    for mask in 0u32..1 << optional.len() {
        let mut on: Vec<usize> = (0..n).filter(|&v| required[v]).collect();
        on.extend(
            optional
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        );
        on.sort_unstable();
        let Ok(tree) = minimum_spanning_tree(&g, &on) else {
            continue;
        };
        let cost: f64 = tree.iter().map(|e| e.weight).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, tree));
        }
    }
    best.ok_or(OracleError::Infeasible)
}

pub fn exact_steiner(costs: &CostMatrix, root: usize, terminals: &[usize]) -> Result<f64, OracleError> {
    exact_steiner_tree(costs, root, terminals).map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Cheapest edge subset whose graph joins every terminal to the root.
    fn by_edge_subsets(costs: &CostMatrix, root: usize, terminals: &[usize]) -> f64 {
        let n = costs.n();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut best = f64::INFINITY;
        for mask in 0u32..1 << pairs.len() {
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut cost = 0.0;
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    cost += costs.get(u, v);
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    parent[a] = b;
                }
            }
            if cost < best {
                let r = find(&mut parent, root);
                if terminals.iter().all(|&t| find(&mut parent, t) == r) {
                    best = cost;
                }
            }
        }
        best
    }

    #[test]
    fn trivial_cases() {
        let m = CostMatrix::from_points(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_eq!(exact_steiner(&m, 0, &[]).unwrap(), 0.0);
        assert_eq!(exact_steiner(&m, 0, &[0]).unwrap(), 0.0);
        assert_eq!(exact_steiner(&m, 0, &[2]).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn one_terminal_costs_the_shortest_path() {
        let mut m = CostMatrix::zeros(4);
        for (u, v, w) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0), (0, 3, 9.0), (1, 3, 9.0), (2, 3, 9.0)] {
            m.set(u, v, w);
        }
        assert_eq!(exact_steiner(&m, 0, &[2]).unwrap(), 2.0);
    }

    #[test]
    fn agrees_with_edge_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5);
            let mut m = CostMatrix::zeros(n);
            for u in 0..n {
                for v in u + 1..n {
                    m.set(u, v, rng.gen_range(0..10) as f64);
                }
            }
            let terms: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.5)).collect();
            let a = exact_steiner(&m, 0, &terms).unwrap();
            let b = by_edge_subsets(&m, 0, &terms);
            assert_eq!(a, b, "{m:?} {terms:?}");
        }
    }

    #[test]
    fn guard() {
        let m = CostMatrix::zeros(8);
        assert!(matches!(exact_steiner(&m, 0, &[1]), Err(OracleError::InstanceTooLarge { .. })));
    }
}
