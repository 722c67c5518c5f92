use crate::error::GraphError;
use crate::graph::{
    eulerian_shortcut_tour, greedy_perfect_matching, min_weight_perfect_matching,
    minimum_spanning_tree, CostMatrix, Graph, MatchingMode, Tour,
};

/// Christofides' tour through `subset` (which must hold `depot`) on a metric.
pub fn christofides_tour(
    costs: &CostMatrix,
    subset: &[usize],
    depot: usize,
    matching: MatchingMode,
) -> Result<Tour, GraphError> {
    let n = costs.n();
    let mut on: Vec<usize> = subset.to_vec();
    on.push(depot);
    on.sort_unstable();
    on.dedup();
    if let Some(&v) = on.iter().find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n });
    }
    if on.len() == 1 {
        return Ok(Tour::trivial(depot));
    }
    let g = Graph::from_matrix(costs);
    let tree = minimum_spanning_tree(&g, &on)?;
    let mut degree = vec![0usize; n];
    for e in &tree {
        degree[e.u] += 1;
        degree[e.v] += 1;
    }
    let odd: Vec<usize> = on.iter().copied().filter(|&v| degree[v] % 2 == 1).collect();
    let pairs = match matching {
        MatchingMode::Blossom => min_weight_perfect_matching(&g, &odd)?,
        MatchingMode::Greedy => greedy_perfect_matching(&g, &odd)?,
    };
    let mut multigraph: Vec<(usize, usize)> = tree.iter().map(|e| (e.u, e.v)).collect();
    multigraph.extend(pairs);
    eulerian_shortcut_tour(&multigraph, depot, costs)
}
