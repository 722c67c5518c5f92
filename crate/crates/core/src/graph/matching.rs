use super::blossom::max_weight_matching;
use super::{Edge, Graph};
use crate::error::GraphError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingMode {
    /// Exact minimum-weight perfect matching.
    #[default]
    Blossom,
    /// Cheapest-edge-first greedy matching. No approximation guarantee.
    Greedy,
}

/// Costs are mapped onto integers in `[0, 2^40]` before matching, so the
/// result is optimal up to a relative error of about 1e-12.
const QUANT: f64 = (1u64 << 40) as f64;

fn induced(g: &Graph, on: &[usize]) -> Result<(Vec<usize>, Vec<Edge>), GraphError> {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in on.iter().enumerate() {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        local[v] = i;
    }
    if on.len() % 2 == 1 {
        return Err(GraphError::OddSubset(on.len()));
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX && e.weight.is_finite())
        .map(|e| Edge::new(local[e.u], local[e.v], e.weight))
        .collect();
    Ok((local, edges))
}

/// Minimum-weight perfect matching on the subgraph induced by `on`, as pairs
/// of original vertex ids.
pub fn min_weight_perfect_matching(
    g: &Graph,
    on: &[usize],
) -> Result<Vec<(usize, usize)>, GraphError> {
    let (_, edges) = induced(g, on)?;
    if on.is_empty() {
        return Ok(Vec::new());
    }
    let max_c = edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    let scale = if max_c > 0.0 { QUANT / max_c } else { 1.0 };
    let top = (max_c * scale).round() as i64 + 1;
    let int_edges: Vec<(usize, usize, i64)> = edges
        .iter()
        .map(|e| (e.u, e.v, top - (e.weight * scale).round() as i64))
        .collect();
    let mate = max_weight_matching(on.len(), &int_edges, true);
    let mut pairs = Vec::with_capacity(on.len() / 2);
    for (i, m) in mate.iter().enumerate() {
        match m {
            None => return Err(GraphError::NoPerfectMatching),
            Some(j) if i < *j => pairs.push((on[i], on[*j])),
            _ => {}
        }
    }
    Ok(pairs)
}

/// Repeatedly takes the cheapest edge between two unmatched vertices.
pub fn greedy_perfect_matching(g: &Graph, on: &[usize]) -> Result<Vec<(usize, usize)>, GraphError> {
    let (_, mut edges) = induced(g, on)?;
    edges.sort_by(|a, b| a.weight.total_cmp(&b.weight).then_with(|| a.key().cmp(&b.key())));
    let mut used = vec![false; on.len()];
    let mut pairs = Vec::with_capacity(on.len() / 2);
    for e in edges {
        if !used[e.u] && !used[e.v] {
            used[e.u] = true;
            used[e.v] = true;
            pairs.push((on[e.u.min(e.v)], on[e.u.max(e.v)]));
        }
    }
    if pairs.len() * 2 != on.len() {
        return Err(GraphError::NoPerfectMatching);
    }
    Ok(pairs)
}
