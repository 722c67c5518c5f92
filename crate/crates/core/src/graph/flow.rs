use super::{CutResult, Graph};
use crate::error::GraphError;
use std::collections::VecDeque;

const RESIDUAL_EPS: f64 = 1e-12;

struct Arc {
    to: usize,
    cap: f64,
}

/// Dinic's algorithm on the undirected graph (each edge is a pair of
/// opposite arcs with the edge weight as capacity).
struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(g: &Graph, big: f64) -> Self {
        let mut arcs = Vec::with_capacity(g.edges().len() * 2);
        let mut adj = vec![Vec::new(); g.n()];
        for e in g.edges() {
            let cap = if e.weight.is_finite() { e.weight } else { big };
            adj[e.u].push(arcs.len());
            arcs.push(Arc { to: e.v, cap });
            adj[e.v].push(arcs.len());
            arcs.push(Arc { to: e.u, cap });
        }
        Dinic {
            arcs,
            adj,
            level: vec![-1; g.n()],
            next: vec![0; g.n()],
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > RESIDUAL_EPS && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64) -> f64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let a = self.adj[u][self.next[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > RESIDUAL_EPS && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0.0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= 0.0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > RESIDUAL_EPS && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

/// Minimum `s`-`t` cut. Infinite edge weights are replaced by
/// [`Graph::inf_sentinel`] so they are never cut when a finite cut exists.
pub fn min_st_cut(g: &Graph, s: usize, t: usize) -> Result<CutResult, GraphError> {
    for x in [s, t] {
        if x >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: x, n: g.n() });
        }
    }
    if s == t {
        return Err(GraphError::SameTerminals(s));
    }
    let mut dinic = Dinic::new(g, g.inf_sentinel());
    let flow_value = dinic.max_flow(s, t);
    let mask = dinic.reachable(s);
    let value = g
        .edges()
        .iter()
        .filter(|e| mask[e.u] != mask[e.v])
        .map(|e| if e.weight.is_finite() { e.weight } else { g.inf_sentinel() })
        .sum();
    let source_side = (0..g.n()).filter(|&v| mask[v]).collect();
    Ok(CutResult {
        value,
        source_side,
        flow_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 5.0).unwrap();
        let cut = min_st_cut(&g, 0, 1).unwrap();
        assert_eq!(cut.value, 5.0);
        assert_eq!(cut.source_side, vec![0]);
    }

    #[test]
    fn disconnected_terminals() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1, 5.0).unwrap();
        g.add_edge(2, 3, 5.0).unwrap();
        let cut = min_st_cut(&g, 0, 3).unwrap();
        assert_eq!(cut.value, 0.0);
        assert_eq!(cut.source_side, vec![0, 1]);
    }

    #[test]
    fn infinite_edges_are_not_cut() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, f64::INFINITY).unwrap();
        g.add_edge(1, 2, 4.0).unwrap();
        g.add_edge(0, 2, 1.0).unwrap();
        let cut = min_st_cut(&g, 0, 2).unwrap();
        assert_eq!(cut.value, 5.0);
        assert_eq!(cut.source_side, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_terminals() {
        let g = Graph::new(2);
        assert_eq!(min_st_cut(&g, 1, 1), Err(GraphError::SameTerminals(1)));
        assert!(min_st_cut(&g, 0, 2).is_err());
    }

    fn brute_force(g: &Graph, s: usize, t: usize) -> f64 {
        let others: Vec<usize> = (0..g.n()).filter(|&v| v != s && v != t).collect();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << others.len()) {
            let mut side = vec![false; g.n()];
            side[s] = true;
            for (k, &v) in others.iter().enumerate() {
                side[v] = mask & (1 << k) != 0;
            }
            best = best.min(g.cut_weight(&side));
        }
        best
    }

    #[test]
    fn matches_partition_enumeration_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let mut g = Graph::new(6);
            for u in 0..6 {
                for v in u + 1..6 {
                    if rng.gen_bool(0.6) {
                        g.add_edge(u, v, rng.gen_range(0..10) as f64).unwrap();
                    }
                }
            }
            let cut = min_st_cut(&g, 0, 5).unwrap();
            let expected = brute_force(&g, 0, 5);
            assert_eq!(cut.value, expected);
            assert!((cut.flow_value - cut.value).abs() < 1e-9);
            let mask = cut.side_mask(6);
            assert!(mask[0] && !mask[5]);
            assert_eq!(g.cut_weight(&mask), cut.value);
        }
    }
}
