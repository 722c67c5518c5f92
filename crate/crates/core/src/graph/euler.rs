use super::{CostMatrix, Tour};
use crate::error::GraphError;

/// Euler circuit of the multigraph `edges` from `depot`, shortcut to a tour
/// visiting each vertex once in order of first appearance.
pub fn eulerian_shortcut_tour(
    edges: &[(usize, usize)],
    depot: usize,
    costs: &CostMatrix,
) -> Result<Tour, GraphError> {
    let n = costs.n();
    if depot >= n {
        return Err(GraphError::VertexOutOfRange { vertex: depot, n });
    }
    if edges.is_empty() {
        return Ok(Tour::trivial(depot));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v)) in edges.iter().enumerate() {
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() % 2 == 1) {
        return Err(GraphError::OddDegreeVertex(v));
    }
    if adj[depot].is_empty() {
        return Err(GraphError::Disconnected);
    }

    // Hierholzer
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; n];
    let mut stack = vec![depot];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]].1] {
            next[v] += 1;
        }
        if next[v] == adj[v].len() {
            circuit.push(v);
            stack.pop();
        } else {
            let (w, k) = adj[v][next[v]];
            used[k] = true;
            stack.push(w);
        }
    }
    if used.iter().any(|u| !u) {
        return Err(GraphError::Disconnected);
    }
    circuit.reverse();

    let mut seen = vec![false; n];
    let order: Vec<usize> = circuit
        .into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    Ok(Tour::from_order(order, costs))
}
