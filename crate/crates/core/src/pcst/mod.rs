//! Multistage prize-collecting Steiner tree.

mod gw;
pub mod lp;

pub use gw::{gw_steiner_tree, GwResult, Moat};
pub use lp::pcst_lp_solve;

use crate::error::InstanceError;
use crate::graph::CostMatrix;
use crate::lp::LpConfig;
use crate::rounding::{two_threshold_round, DerandomizationConfig, RoundingParams};
use crate::schedule::{
    cheapest_over_candidates, series, transition_cost, CostBreakdown, FractionalSolution, Mode,
    RoundedSchedule, Solution, StepStructure,
};
use crate::validate;
use crate::Result;
use serde::{Deserialize, Serialize};

pub const FIXED: RoundingParams = RoundingParams {
    alpha: 0.75,
    beta: 0.5,
};
pub const FIXED_BOUND: f64 = 4.0;
pub const DERANDOMIZED_BOUND: f64 = 3.53;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcstStep {
    /// Symmetric edge costs; `None` marks a missing edge.
    pub costs: Vec<Vec<Option<f64>>>,
    pub penalties: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsPcstInstance {
    pub vertices: usize,
    pub root: usize,
    pub steps: Vec<PcstStep>,
    /// `transition[v]`: cost of connecting `v` at one step and not the next, or
    /// the other way round.
    pub transition: Vec<f64>,
}

impl MsPcstInstance {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.vertices;
        validate::horizon(self.steps.len())?;
        validate::vertex(|| "root".into(), self.root, n)?;
        for (t, step) in self.steps.iter().enumerate() {
            validate_costs(&format!("steps[{t}].costs"), &step.costs, n, true)?;
            let field = format!("steps[{t}].penalties");
            validate::len(&field, step.penalties.len(), n)?;
            validate::weights(&field, &step.penalties)?;
        }
        validate::len("transition", self.transition.len(), n)?;
        validate::weights("transition", &self.transition)?;
        Ok(())
    }

    /// Weight given to missing edges: the total of every finite edge cost and
    /// every penalty, plus one. Any solution using such an edge costs more
    /// than leaving every vertex unconnected at every step.
    pub fn missing_edge_weight(&self) -> f64 {
        let mut total = 1.0;
        for step in &self.steps {
            for (u, row) in step.costs.iter().enumerate() {
                total += row.iter().skip(u + 1).flatten().sum::<f64>();
            }
            total += step.penalties.iter().sum::<f64>();
        }
        total
    }

    pub fn step_costs(&self, t: usize) -> CostMatrix {
        let big = self.missing_edge_weight();
        let mut m = CostMatrix::zeros(self.vertices);
        for u in 0..self.vertices {
            for v in u + 1..self.vertices {
                m.set(u, v, self.steps[t].costs[u][v].unwrap_or(big));
            }
        }
        m
    }

    /// Penalty and transition parts of a schedule of connected-vertex sets.
    pub fn decision_costs(&self, connected: &[Vec<bool>]) -> CostBreakdown {
        let mut penalty = 0.0;
        for (t, row) in connected.iter().enumerate() {
            for v in (0..self.vertices).filter(|&v| v != self.root && !row[v]) {
                penalty += self.steps[t].penalties[v];
            }
        }
        CostBreakdown {
            step: 0.0,
            penalty,
            transition: transition_cost(connected, |_, v| {
                if v == self.root {
                    0.0
                } else {
                    self.transition[v]
                }
            }),
        }
    }
}

pub(crate) fn validate_costs(
    field: &str,
    costs: &[Vec<Option<f64>>],
    n: usize,
    allow_missing: bool,
) -> Result<(), InstanceError> {
    validate::len(field, costs.len(), n)?;
    for (u, row) in costs.iter().enumerate() {
        validate::len(&format!("{field}[{u}]"), row.len(), n)?;
        for (v, c) in row.iter().enumerate() {
            let here = || format!("{field}[{u}][{v}]");
            match c {
                None if u == v => {}
                None if allow_missing => {}
                None => return Err(InstanceError::invalid(here(), "missing cost")),
                Some(w) => {
                    validate::weight(here, *w)?;
                    if u == v && *w != 0.0 {
                        return Err(InstanceError::invalid(here(), "diagonal entries must be 0"));
                    }
                }
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let same = match (costs[u][v], costs[v][u]) {
                (None, None) => true,
                (Some(a), Some(b)) => (a - b).abs() <= 1e-9 * (1.0 + a.abs()),
                _ => false,
            };
            if !same {
                return Err(InstanceError::invalid(
                    format!("{field}[{v}][{u}]"),
                    format!("differs from entry [{u}][{v}]; costs must be symmetric"),
                ));
            }
        }
    }
    Ok(())
}

/// Rounds every non-root vertex's connection series with `p` and builds a
/// Steiner tree per step on the vertices rounded to 1.
pub fn round_with(
    inst: &MsPcstInstance,
    frac: &FractionalSolution,
    p: &RoundingParams,
) -> Result<RoundedSchedule> {
    let (n, big_t) = (inst.vertices, inst.horizon());
    let mut decisions = vec![vec![false; n]; big_t];
    for v in 0..n {
        if v == inst.root {
            decisions.iter_mut().for_each(|d| d[v] = true);
            continue;
        }
        for (t, y) in two_threshold_round(&series(&frac.s, v), p)?.into_iter().enumerate() {
            decisions[t][v] = y;
        }
    }
    let mut cost = inst.decision_costs(&decisions);
    let mut structures = Vec::with_capacity(big_t);
    for (t, d) in decisions.iter().enumerate() {
        let terminals: Vec<usize> = (0..n).filter(|&v| d[v] && v != inst.root).collect();
        let tree = gw_steiner_tree(&inst.step_costs(t), inst.root, &terminals);
        cost.step += tree.cost;
        structures.push(StepStructure::Tree { edges: tree.edges });
    }
    Ok(RoundedSchedule {
        decisions,
        structures,
        cost,
    })
}

/// All fractional connection values of non-root vertices.
pub(crate) fn non_root_values(frac: &FractionalSolution, root: usize) -> Vec<f64> {
    frac.s
        .iter()
        .flat_map(|row| {
            row.iter()
                .enumerate()
                .filter(move |(v, _)| *v != root)
                .map(|(_, &x)| x)
        })
        .collect()
}

pub fn solve_ms_pcst(inst: &MsPcstInstance, mode: Mode, cfg: &LpConfig) -> Result<Solution> {
    inst.validate()?;
    let frac = pcst_lp_solve(inst, cfg)?;
    let (schedule, params, gamma, bound) = match mode {
        Mode::Fixed => (round_with(inst, &frac, &FIXED)?, FIXED, None, FIXED_BOUND),
        Mode::Derandomized => {
            let d = DerandomizationConfig::pcst();
            let values = non_root_values(&frac, inst.root);
            let (s, p) = cheapest_over_candidates(&values, &d, |p| round_with(inst, &frac, p))?;
            (s, p, Some(d.gamma), DERANDOMIZED_BOUND)
        }
    };
    Ok(Solution {
        schedule,
        fractional: Some(frac),
        alpha: Some(params.alpha),
        beta: Some(params.beta),
        gamma,
        f: None,
        bound: Some(bound),
        flags: Vec::new(),
    })
}
