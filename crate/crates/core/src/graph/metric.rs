use super::CostMatrix;

pub const METRIC_TOL: f64 = 1e-9;

/// First triple `(i, j, k)` with `c(i,k) > c(i,j) + c(j,k)` beyond tolerance,
/// or `None` if the matrix is a metric.
pub fn check_metric(costs: &CostMatrix) -> Option<(usize, usize, usize)> {
    let n = costs.n();
    for i in 0..n {
        for k in i + 1..n {
            let direct = costs.get(i, k);
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let via = costs.get(i, j) + costs.get(j, k);
                if direct > via + METRIC_TOL * (1.0 + via) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Shortest-path distances (Floyd-Warshall).
pub fn metric_closure(costs: &CostMatrix) -> CostMatrix {
    let n = costs.n();
    let mut d = costs.clone();
    for k in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                let via = d.get(i, k) + d.get(k, j);
                if via < d.get(i, j) {
                    d.set(i, j, via);
                }
            }
        }
    }
    d
}
