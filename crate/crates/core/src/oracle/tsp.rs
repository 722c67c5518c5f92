use crate::error::OracleError;
use crate::graph::{CostMatrix, Tour};

pub const MAX_TSP_SUBSET: usize = 10;

/// Optimal tour through `subset` and `depot` by Held-Karp dynamic programming.
pub fn exact_tsp_tour(costs: &CostMatrix, subset: &[usize], depot: usize) -> Result<Tour, OracleError> {
    let mut others: Vec<usize> = subset.iter().copied().filter(|&v| v != depot).collect();
    others.sort_unstable();
    others.dedup();
    if others.len() + 1 > MAX_TSP_SUBSET {
        return Err(OracleError::InstanceTooLarge {
            what: "tour subset",
            size: others.len() + 1,
            limit: MAX_TSP_SUBSET,
        });
    }
    let k = others.len();
    if k == 0 {
        return Ok(Tour::trivial(depot));
    }
    let full = (1usize << k) - 1;
    // best[mask][j]: shortest depot path through `mask` ending at others[j]
    let mut best = vec![vec![f64::INFINITY; k]; full + 1];
    let mut prev = vec![vec![usize::MAX; k]; full + 1];
    for j in 0..k {
        best[1 << j][j] = costs.get(depot, others[j]);
    }
    for mask in 1..=full {
        for j in 0..k {
            if mask >> j & 1 == 0 || best[mask][j].is_infinite() {
                continue;
            }
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let next = mask | 1 << i;
                let c = best[mask][j] + costs.get(others[j], others[i]);
                if c < best[next][i] {
                    best[next][i] = c;
                    prev[next][i] = j;
                }
            }
        }
    }
    let last = (0..k)
        .min_by(|&a, &b| {
            let ca = best[full][a] + costs.get(others[a], depot);
            let cb = best[full][b] + costs.get(others[b], depot);
            ca.total_cmp(&cb)
        })
        .expect("k > 0");
    let mut order = Vec::with_capacity(k + 1);
    let (mut mask, mut j) = (full, last);
    while j != usize::MAX {
        order.push(others[j]);
        let p = prev[mask][j];
        mask &= !(1 << j);
        j = p;
    }
    order.push(depot);
    order.reverse();
    Ok(Tour::from_order(order, costs))
}

pub fn exact_tsp(costs: &CostMatrix, subset: &[usize], depot: usize) -> Result<f64, OracleError> {
    exact_tsp_tour(costs, subset, depot).map(|t| t.length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tour_length;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn by_permutations(costs: &CostMatrix, rest: &mut Vec<usize>, depot: usize, k: usize) -> f64 {
        if k == rest.len() {
            let mut order = vec![depot];
            order.extend(rest.iter().copied());
            return tour_length(&order, costs);
        }
        let mut best = f64::INFINITY;
        for i in k..rest.len() {
            rest.swap(k, i);
            best = best.min(by_permutations(costs, rest, depot, k + 1));
            rest.swap(k, i);
        }
        best
    }

    #[test]
    fn small_subsets() {
        let m = CostMatrix::from_points(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0), (9.0, 9.0)]);
        assert_eq!(exact_tsp(&m, &[0], 0).unwrap(), 0.0);
        assert_eq!(exact_tsp(&m, &[0, 1], 0).unwrap(), 6.0);
        assert_eq!(exact_tsp(&m, &[0, 1, 2], 0).unwrap(), 12.0);
    }

    #[test]
    fn agrees_with_permutation_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..8).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
            let m = CostMatrix::from_points(&pts);
            let tour = exact_tsp_tour(&m, &(0..8).collect::<Vec<_>>(), 0).unwrap();
            let mut sorted = tour.order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..8).collect::<Vec<_>>());
            let brute = by_permutations(&m, &mut (1..8).collect(), 0, 0);
            assert!((tour.length - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn guard() {
        let m = CostMatrix::zeros(12);
        let all: Vec<usize> = (0..12).collect();
        assert!(matches!(exact_tsp(&m, &all, 0), Err(OracleError::InstanceTooLarge { .. })));
    }
}
