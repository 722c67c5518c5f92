//! Exact brute-force solvers for tiny instances: enumerate every feasible
//! decision vector per step, then dynamic programming across time.

mod full_lp;
mod steiner;
mod tsp;

pub use full_lp::{pcst_full_lp_value, pctsp_full_lp_value};
pub use steiner::{exact_steiner, exact_steiner_tree, MAX_STEINER_VERTICES};
pub use tsp::{exact_tsp, exact_tsp_tour, MAX_TSP_SUBSET};

use crate::error::OracleError;
use crate::mincut::MsCutInstance;
use crate::pcst::MsPcstInstance;
use crate::pctsp::MsPctspInstance;
use crate::schedule::{RoundedSchedule, StepStructure};
use crate::set_cover::MsScInstance;
use crate::vertex_cover::MsVcInstance;
use crate::Result;
use rayon::prelude::*;

pub const MAX_VERTICES: usize = 7;
pub const MAX_SETS: usize = 7;
pub const MAX_STEPS: usize = 4;

fn guard(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::InstanceTooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// A feasible decision vector of one step and its exact step cost
/// (including penalties).
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub decision: Vec<bool>,
    pub cost: f64,
}

/// Per step, every feasible decision vector with its cost.
pub type StateSpace = Vec<Vec<State>>;

fn all_vectors(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << k).map(move |m| (0..k).map(|i| m >> i & 1 == 1).collect())
}

/// Cheapest path through the state space; `weight(t, i)` is the cost of
/// flipping item `i` between steps `t` and `t + 1`. Ties keep the state
/// listed first.
pub fn optimal_path(
    space: &StateSpace,
    weight: impl Fn(usize, usize) -> f64,
) -> Result<Vec<Vec<bool>>, OracleError> {
    if space.iter().any(Vec::is_empty) {
        return Err(OracleError::Infeasible);
    }
    let mut best: Vec<f64> = space[0].iter().map(|s| s.cost).collect();
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(space.len());
    for t in 1..space.len() {
        let mut next = Vec::with_capacity(space[t].len());
        let mut arg = Vec::with_capacity(space[t].len());
        for s in &space[t] {
            let mut b = (f64::INFINITY, 0);
            for (i, p) in space[t - 1].iter().enumerate() {
                let flip: f64 = p
                    .decision
                    .iter()
                    .zip(&s.decision)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(v, _)| weight(t - 1, v))
                    .sum();
                let c = best[i] + flip;
                if c < b.0 {
                    b = (c, i);
                }
            }
            next.push(b.0 + s.cost);
            arg.push(b.1);
        }
        best = next;
        back.push(arg);
    }
    let mut j = (0..best.len())
        .min_by(|&a, &b| best[a].total_cmp(&best[b]).then(a.cmp(&b)))
        .expect("non-empty");
    let mut path = vec![space[space.len() - 1][j].decision.clone()];
    for t in (1..space.len()).rev() {
        j = back[t - 1][j];
        path.push(space[t - 1][j].decision.clone());
    }
    path.reverse();
    Ok(path)
}

pub fn oracle_mincut(inst: &MsCutInstance) -> Result<RoundedSchedule> {
    inst.validate()?;
    guard("vertices", inst.vertices, MAX_VERTICES)?;
    guard("steps", inst.horizon(), MAX_STEPS)?;
    let n = inst.vertices;
    let space: StateSpace = (0..inst.horizon())
        .into_par_iter()
        .map(|t| {
            all_vectors(n)
                .filter(|d| d[inst.source] && !d[inst.sink])
                .map(|d| State {
                    cost: inst.steps[t].edges.iter().filter(|e| d[e.0] != d[e.1]).map(|e| e.2).sum(),
                    decision: d,
                })
                .collect()
        })
        .collect();
    let decisions = optimal_path(&space, |t, v| inst.transition[t][v])?;
    let structures = decisions
        .iter()
        .map(|d| StepStructure::Cut {
            source_side: (0..n).filter(|&v| d[v]).collect(),
        })
        .collect();
    Ok(RoundedSchedule {
        cost: inst.evaluate(&decisions),
        decisions,
        structures,
    })
}

pub fn oracle_vertexcover(inst: &MsVcInstance) -> Result<RoundedSchedule> {
    inst.validate()?;
    guard("vertices", inst.vertices, MAX_VERTICES)?;
    guard("steps", inst.horizon(), MAX_STEPS)?;
    let n = inst.vertices;
    let space: StateSpace = (0..inst.horizon())
        .into_par_iter()
        .map(|t| {
            all_vectors(n)
                .filter(|d| inst.is_cover(t, d))
                .map(|d| State {
                    cost: (0..n).filter(|&v| d[v]).map(|v| inst.steps[t].weights[v]).sum(),
                    decision: d,
                })
                .collect()
        })
        .collect();
    let decisions = optimal_path(&space, |t, v| inst.transition[t][v])?;
    let structures = decisions
        .iter()
        .map(|d| StepStructure::Cover {
            vertices: (0..n).filter(|&v| d[v]).collect(),
        })
        .collect();
    Ok(RoundedSchedule {
        cost: inst.evaluate(&decisions),
        decisions,
        structures,
    })
}

pub fn oracle_setcover(inst: &MsScInstance) -> Result<RoundedSchedule> {
    inst.validate()?;
    guard("sets", inst.sets, MAX_SETS)?;
    guard("steps", inst.horizon(), MAX_STEPS)?;
    let m = inst.sets;
    let space: StateSpace = (0..inst.horizon())
        .into_par_iter()
        .map(|t| {
            all_vectors(m)
                .filter(|d| inst.is_cover(t, d))
                .map(|d| State {
                    cost: (0..m).filter(|&i| d[i]).map(|i| inst.steps[t].weights[i]).sum(),
                    decision: d,
                })
                .collect()
        })
        .collect();
    let decisions = optimal_path(&space, |_, i| inst.penalties[i])?;
    let structures = decisions
        .iter()
        .map(|d| StepStructure::Collection {
            sets: (0..m).filter(|&i| d[i]).collect(),
        })
        .collect();
    Ok(RoundedSchedule {
        cost: inst.evaluate(&decisions),
        decisions,
        structures,
    })
}

/// Decision vectors with the fixed vertex `keep` always set.
fn rooted_vectors(n: usize, keep: usize) -> impl Iterator<Item = Vec<bool>> {
    all_vectors(n).filter(move |d| d[keep])
}

fn penalty(penalties: &[f64], d: &[bool]) -> f64 {
    d.iter().zip(penalties).filter(|(x, _)| !**x).map(|(_, p)| p).sum()
}

pub fn oracle_pcst(inst: &MsPcstInstance) -> Result<RoundedSchedule> {
    inst.validate()?;
    guard("vertices", inst.vertices, MAX_VERTICES)?;
    guard("steps", inst.horizon(), MAX_STEPS)?;
    let (n, r) = (inst.vertices, inst.root);
    let space: Vec<Vec<State>> = (0..inst.horizon())
        .into_par_iter()
        .map(|t| -> Result<Vec<State>> {
            let costs = inst.step_costs(t);
            rooted_vectors(n, r)
                .map(|d| {
                    let terms: Vec<usize> = (0..n).filter(|&v| d[v]).collect();
                    let tree = exact_steiner(&costs, r, &terms)?;
                    Ok(State {
                        cost: tree + penalty(&inst.steps[t].penalties, &d),
                        decision: d,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let decisions = optimal_path(&space, |_, v| if v == r { 0.0 } else { inst.transition[v] })?;
    let mut cost = inst.decision_costs(&decisions);
    let mut structures = Vec::new();
    for (t, d) in decisions.iter().enumerate() {
        let terms: Vec<usize> = (0..n).filter(|&v| d[v]).collect();
        let (c, edges) = exact_steiner_tree(&inst.step_costs(t), r, &terms)?;
        cost.step += c;
        structures.push(StepStructure::Tree { edges });
    }
    Ok(RoundedSchedule {
        decisions,
        structures,
        cost,
    })
}

pub fn oracle_pctsp(inst: &MsPctspInstance) -> Result<RoundedSchedule> {
    inst.validate()?;
    guard("vertices", inst.vertices, MAX_VERTICES)?;
    guard("steps", inst.horizon(), MAX_STEPS)?;
    let (n, r) = (inst.vertices, inst.depot);
    let space: Vec<Vec<State>> = (0..inst.horizon())
        .into_par_iter()
        .map(|t| -> Result<Vec<State>> {
            let costs = inst.step_costs(t);
            rooted_vectors(n, r)
                .map(|d| {
                    let subset: Vec<usize> = (0..n).filter(|&v| d[v]).collect();
                    let tour = exact_tsp(&costs, &subset, r)?;
                    Ok(State {
                        cost: tour + penalty(&inst.steps[t].penalties, &d),
                        decision: d,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let decisions = optimal_path(&space, |_, v| if v == r { 0.0 } else { inst.transition[v] })?;
    let mut cost = inst.decision_costs(&decisions);
    let mut structures = Vec::new();
    for (t, d) in decisions.iter().enumerate() {
        let subset: Vec<usize> = (0..n).filter(|&v| d[v]).collect();
        let tour = exact_tsp_tour(&inst.step_costs(t), &subset, r)?;
        cost.step += tour.length;
        structures.push(StepStructure::Tour(tour));
    }
    Ok(RoundedSchedule {
        decisions,
        structures,
        cost,
    })
}
