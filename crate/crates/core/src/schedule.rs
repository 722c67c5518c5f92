//! Solution types shared by all multistage problems.

use crate::graph::{Edge, Tour};
use crate::rounding::{candidate_alphas, DerandomizationConfig, RoundingParams};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How rounding thresholds are chosen for the prize-collecting problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The fixed thresholds of the basic algorithm.
    #[default]
    Fixed,
    /// Best schedule over all candidate thresholds.
    Derandomized,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed" => Ok(Mode::Fixed),
            "derandomized" => Ok(Mode::Derandomized),
            other => Err(format!("unknown mode `{other}` (expected fixed or derandomized)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::Derandomized => "derandomized",
        })
    }
}

/// Rounds with every candidate threshold and keeps the cheapest schedule;
/// ties go to the smaller `alpha`.
pub(crate) fn cheapest_over_candidates<F>(
    values: &[f64],
    cfg: &DerandomizationConfig,
    round: F,
) -> Result<(RoundedSchedule, RoundingParams)>
where
    F: Fn(&RoundingParams) -> Result<RoundedSchedule> + Sync,
{
    let results: Vec<Result<(RoundedSchedule, RoundingParams)>> = candidate_alphas(values, cfg)
        .into_par_iter()
        .map(|a| {
            let p = cfg.params(a);
            round(&p).map(|s| (s, p))
        })
        .collect();
    let mut best: Option<(RoundedSchedule, RoundingParams)> = None;
    for r in results {
        let (s, p) = r?;
        if best.as_ref().is_none_or(|(b, _)| s.total_cost() < b.total_cost()) {
            best = Some((s, p));
        }
    }
    Ok(best.expect("candidate set always holds gamma and 1"))
}

/// Cost split into its three kinds. `step` is the per-step solution cost
/// (cut weight, cover weight, tree or tour length), `penalty` the prizes lost
/// on unserved vertices, `transition` the cost of changed decisions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub step: f64,
    pub penalty: f64,
    pub transition: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.step + self.penalty + self.transition
    }

    /// Replaces negative zeros (empty float sums) by zero.
    pub fn normalized(self) -> Self {
        CostBreakdown {
            step: self.step + 0.0,
            penalty: self.penalty + 0.0,
            transition: self.transition + 0.0,
        }
    }
}

impl std::ops::Add for CostBreakdown {
    type Output = CostBreakdown;

    fn add(self, o: CostBreakdown) -> CostBreakdown {
        CostBreakdown {
            step: self.step + o.step,
            penalty: self.penalty + o.penalty,
            transition: self.transition + o.transition,
        }
    }
}

/// What was built at one time step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepStructure {
    Cut { source_side: Vec<usize> },
    Cover { vertices: Vec<usize> },
    Collection { sets: Vec<usize> },
    Tree { edges: Vec<Edge> },
    Tour(Tour),
}

/// Integral multistage solution: one decision vector per step (cut side,
/// cover membership, chosen sets, or connected/visited vertices).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundedSchedule {
    pub decisions: Vec<Vec<bool>>,
    pub structures: Vec<StepStructure>,
    pub cost: CostBreakdown,
}

impl RoundedSchedule {
    pub fn total_cost(&self) -> f64 {
        self.cost.total()
    }
}

/// Optimal LP solution in problem terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSolution {
    /// Per step, the fractional decision of each vertex or set.
    pub s: Vec<Vec<f64>>,
    /// Per step, edge values as `(u, v, value)`; empty for covering problems.
    pub x: Vec<Vec<(usize, usize, f64)>>,
    /// Per boundary, per vertex or set.
    pub z: Vec<Vec<f64>>,
    pub lp_value: f64,
    /// LP objective split the same way as [`CostBreakdown`].
    pub parts: CostBreakdown,
    pub cut_rounds: usize,
    pub cuts_added: usize,
    pub exact_fallback: bool,
}

/// A solved instance: the integral schedule plus everything needed to judge it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub schedule: RoundedSchedule,
    /// Absent for problems solved exactly without an LP.
    pub fractional: Option<FractionalSolution>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Maximum element frequency (set cover only).
    pub f: Option<usize>,
    /// Proven upper bound on cost / LP value; `None` when the certificate is void.
    pub bound: Option<f64>,
    pub flags: Vec<String>,
}

impl Solution {
    pub fn lp_value(&self) -> Option<f64> {
        self.fractional.as_ref().map(|f| f.lp_value)
    }

    pub fn cost(&self) -> f64 {
        self.schedule.total_cost()
    }
}

/// Transition cost of decision vectors under per-boundary, per-item weights.
pub fn transition_cost(decisions: &[Vec<bool>], weight: impl Fn(usize, usize) -> f64) -> f64 {
    decisions
        .windows(2)
        .enumerate()
        .map(|(t, w)| {
            w[0].iter()
                .zip(&w[1])
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(i, _)| weight(t, i))
                .sum::<f64>()
        })
        .sum()
}

/// Transposes per-step vectors into per-item time series.
pub fn series(per_step: &[Vec<f64>], item: usize) -> Vec<f64> {
    per_step.iter().map(|row| row[item]).collect()
}
