//! Weighted graphs and the combinatorial subroutines built on them.

mod blossom;
mod euler;
mod flow;
mod matching;
mod metric;
mod mst;

pub use euler::eulerian_shortcut_tour;
pub use flow::min_st_cut;
pub use matching::{greedy_perfect_matching, min_weight_perfect_matching, MatchingMode};
pub use metric::{check_metric, metric_closure, METRIC_TOL};
pub use mst::minimum_spanning_tree;

use crate::error::GraphError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64) -> Self {
        Edge { u, v, weight }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Endpoints with the smaller one first.
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// Undirected graph with non-negative edge weights. Parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(v)).map(String::as_str)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weights may be `f64::INFINITY` (uncuttable); they may not be negative or NaN.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if weight.is_nan() || weight < 0.0 {
            return Err(GraphError::InvalidWeight { u, v, weight });
        }
        self.edges.push(Edge { u, v, weight });
        Ok(())
    }

    pub fn total_finite_weight(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.weight)
            .filter(|w| w.is_finite())
            .sum()
    }

    /// Total weight of edges with exactly one endpoint in `side`.
    pub fn cut_weight(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .map(|e| e.weight)
            .sum()
    }

    /// Finite stand-in for "never cut this edge": four times the finite weight
    /// total, plus one.
    pub fn inf_sentinel(&self) -> f64 {
        inf_sentinel_for(self.total_finite_weight())
    }

    /// Complete graph on the matrix's vertices.
    pub fn from_matrix(costs: &CostMatrix) -> Self {
        let mut g = Graph::new(costs.n());
        for u in 0..costs.n() {
            for v in u + 1..costs.n() {
                g.edges.push(Edge::new(u, v, costs.get(u, v)));
            }
        }
        g
    }
}

pub fn inf_sentinel_for(total_finite: f64) -> f64 {
    4.0 * total_finite + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub value: f64,
    /// Vertices reachable from the source in the final residual network.
    pub source_side: Vec<usize>,
    /// Max-flow value; equals `value` up to floating-point rounding.
    pub flow_value: f64,
}

impl CutResult {
    pub fn side_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.source_side {
            mask[v] = true;
        }
        mask
    }
}

/// Dense symmetric cost matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn zeros(n: usize) -> Self {
        CostMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut m = CostMatrix::zeros(n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::MalformedMatrix(format!(
                    "row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (v, &w) in row.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    return Err(GraphError::MalformedMatrix(format!(
                        "entry ({u}, {v}) = {w} is not a finite non-negative number"
                    )));
                }
                m.data[u * n + v] = w;
            }
        }
        for u in 0..n {
            if m.get(u, u) != 0.0 {
                return Err(GraphError::MalformedMatrix(format!("diagonal entry {u} is non-zero")));
            }
            for v in u + 1..n {
                let (a, b) = (m.get(u, v), m.get(v, u));
                if (a - b).abs() > METRIC_TOL * (1.0 + a.abs()) {
                    return Err(GraphError::MalformedMatrix(format!(
                        "asymmetric entries ({u}, {v}) = {a} and ({v}, {u}) = {b}"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Euclidean distances between planar points.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        let n = points.len();
        let mut m = CostMatrix::zeros(n);
        for u in 0..n {
            for v in u + 1..n {
                let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
                m.set(u, v, dx.hypot(dy));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, w: f64) {
        self.data[u * self.n + v] = w;
        self.data[v * self.n + u] = w;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Closed tour through a vertex set, starting and ending at `depot`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub depot: usize,
    /// Visiting order starting with the depot; the return leg is implicit.
    pub order: Vec<usize>,
    pub length: f64,
}

impl Tour {
    pub fn from_order(order: Vec<usize>, costs: &CostMatrix) -> Self {
        let depot = order[0];
        Tour {
            depot,
            length: tour_length(&order, costs),
            order,
        }
    }

    pub fn trivial(depot: usize) -> Self {
        Tour {
            depot,
            order: vec![depot],
            length: 0.0,
        }
    }

    /// Tour edges as vertex pairs, including the return leg. A two-vertex tour
    /// yields the same pair twice.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        if self.order.len() < 2 {
            return Vec::new();
        }
        let mut out: Vec<(usize, usize)> = self.order.windows(2).map(|w| (w[0], w[1])).collect();
        out.push((*self.order.last().unwrap(), self.depot));
        out
    }
}

pub fn tour_length(order: &[usize], costs: &CostMatrix) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    let inner: f64 = order.windows(2).map(|w| costs.get(w[0], w[1])).sum();
    inner + costs.get(*order.last().unwrap(), order[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_edge_validation() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(0, 0, 1.0), Err(GraphError::SelfLoop(0)));
        assert!(matches!(g.add_edge(0, 3, 1.0), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(g.add_edge(0, 1, -1.0), Err(GraphError::InvalidWeight { .. })));
        g.add_edge(0, 1, 2.0).unwrap();
        g.add_edge(1, 2, f64::INFINITY).unwrap();
        assert_eq!(g.total_finite_weight(), 2.0);
        assert_eq!(g.inf_sentinel(), 9.0);
    }

    #[test]
    fn matrix_validation() {
        assert!(CostMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(CostMatrix::from_rows(&[vec![1.0]]).is_err());
        assert!(CostMatrix::from_rows(&[vec![0.0, 1.0]]).is_err());
        let m = CostMatrix::from_rows(&[vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.rows(), vec![vec![0.0, 3.0], vec![3.0, 0.0]]);
    }

    #[test]
    fn tour_edges_and_length() {
        let m = CostMatrix::from_points(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]);
        let t = Tour::from_order(vec![0, 1, 2], &m);
        assert_eq!(t.length, 12.0);
        assert_eq!(t.edges(), vec![(0, 1), (1, 2), (2, 0)]);
        let back = Tour::from_order(vec![0, 2], &m);
        assert_eq!(back.length, 10.0);
        assert!(Tour::trivial(1).edges().is_empty());
    }
}
