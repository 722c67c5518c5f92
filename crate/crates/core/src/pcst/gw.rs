//! Primal-dual moat growing for the rooted Steiner tree problem.

use crate::graph::{CostMatrix, Edge};
use serde::{Deserialize, Serialize};

/// A dual variable `y_S > 0` together with its vertex set `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moat {
    pub vertices: Vec<usize>,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwResult {
    pub edges: Vec<Edge>,
    pub cost: f64,
    /// Sum of all `y_S`.
    pub dual_value: f64,
    pub moats: Vec<Moat>,
}

impl GwResult {
    /// Largest `sum_{S : e in delta(S)} y_S - c(e)` over all edges.
    pub fn max_dual_excess(&self, costs: &CostMatrix) -> f64 {
        let n = costs.n();
        let mut load = vec![vec![0.0; n]; n];
        for m in &self.moats {
            let mut inside = vec![false; n];
            for &v in &m.vertices {
                inside[v] = true;
            }
            for u in 0..n {
                for v in u + 1..n {
                    if inside[u] != inside[v] {
                        load[u][v] += m.y;
                    }
                }
            }
        }
        let mut worst = f64::NEG_INFINITY;
        for u in 0..n {
            for v in u + 1..n {
                worst = worst.max(load[u][v] - costs.get(u, v));
            }
        }
        worst
    }
}

struct Component {
    vertices: Vec<usize>,
    y: f64,
    active: bool,
}

/// Grows moats around components holding a terminal but not the root until
/// every terminal is connected to the root, then prunes edges that serve no
/// terminal.
pub fn gw_steiner_tree(costs: &CostMatrix, root: usize, terminals: &[usize]) -> GwResult {
    let n = costs.n();
    let mut is_terminal = vec![false; n];
    for &v in terminals {
        if v != root {
            is_terminal[v] = true;
        }
    }
    let mut comp_of: Vec<usize> = (0..n).collect();
    let mut comps: Vec<Component> = (0..n)
        .map(|v| Component {
            vertices: vec![v],
            y: 0.0,
            active: is_terminal[v],
        })
        .collect();
    let mut load = vec![0.0; n];
    let mut forest: Vec<Edge> = Vec::new();
    let mut moats = Vec::new();
    let mut dual_value = 0.0;

    loop {
        let active: Vec<usize> = comp_of
            .iter()
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter(|&c| comps[c].active)
            .collect();
        if active.is_empty() {
            break;
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for u in 0..n {
            for v in u + 1..n {
                let (cu, cv) = (comp_of[u], comp_of[v]);
                if cu == cv {
                    continue;
                }
                let rate = comps[cu].active as u8 + comps[cv].active as u8;
                if rate == 0 {
                    continue;
                }
                let slack = (costs.get(u, v) - load[u] - load[v]).max(0.0);
                let eps = slack / rate as f64;
                if best.is_none_or(|(b, _, _)| eps < b) {
                    best = Some((eps, u, v));
                }
            }
        }
        let Some((eps, u, v)) = best else { break };
        for &c in &active {
            comps[c].y += eps;
            for &x in &comps[c].vertices {
                load[x] += eps;
            }
        }
        dual_value += eps * active.len() as f64;

        let (keep, gone) = (comp_of[u].min(comp_of[v]), comp_of[u].max(comp_of[v]));
        for c in [keep, gone] {
            if comps[c].y > 0.0 {
                moats.push(Moat {
                    vertices: comps[c].vertices.clone(),
                    y: comps[c].y,
                });
            }
        }
        let moved = std::mem::take(&mut comps[gone].vertices);
        for &x in &moved {
            comp_of[x] = keep;
        }
        comps[keep].vertices.extend(moved);
        comps[keep].vertices.sort_unstable();
        comps[keep].y = 0.0;
        comps[keep].active = comps[keep].vertices.iter().any(|&x| is_terminal[x])
            && !comps[keep].vertices.contains(&root);
        comps[gone].active = false;
        forest.push(Edge::new(u, v, costs.get(u, v)));
    }
    for c in comp_of.iter().copied().collect::<std::collections::BTreeSet<_>>() {
        if comps[c].y > 0.0 {
            moats.push(Moat {
                vertices: comps[c].vertices.clone(),
                y: comps[c].y,
            });
        }
    }

    let edges = prune(n, forest, root, &is_terminal);
    GwResult {
        cost: edges.iter().map(|e| e.weight).sum(),
        edges,
        dual_value,
        moats,
    }
}

/// Keeps the part of the forest's root tree needed to reach the terminals:
/// repeatedly drops leaves that are neither terminals nor the root. On a
/// forest this is exactly what reverse deletion leaves behind.
fn prune(n: usize, forest: Vec<Edge>, root: usize, is_terminal: &[bool]) -> Vec<Edge> {
    let mut alive = vec![true; forest.len()];
    let mut degree = vec![0usize; n];
    for e in &forest {
        degree[e.u] += 1;
        degree[e.v] += 1;
    }
    // edges outside the root's tree serve no terminal (all terminals end up
    // with the root); drop them first
    let mut reach = vec![false; n];
    reach[root] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for e in &forest {
            if reach[e.u] != reach[e.v] {
                reach[e.u] = true;
                reach[e.v] = true;
                changed = true;
            }
        }
    }
    for (k, e) in forest.iter().enumerate() {
        if !reach[e.u] {
            alive[k] = false;
            degree[e.u] -= 1;
            degree[e.v] -= 1;
        }
    }
    loop {
        let mut removed = false;
        for (k, e) in forest.iter().enumerate() {
            if !alive[k] {
                continue;
            }
            for x in [e.u, e.v] {
                if degree[x] == 1 && x != root && !is_terminal[x] {
                    alive[k] = false;
                    degree[e.u] -= 1;
                    degree[e.v] -= 1;
                    removed = true;
                    break;
                }
            }
        }
        if !removed {
            break;
        }
    }
    forest
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(e, _)| e)
        .collect()
}
