//! Multistage prize-collecting travelling salesman.

mod christofides;
pub mod lp;

pub use christofides::christofides_tour;
pub use lp::{augmented_costs, dummy_cut_value, pctsp_lp_solve};

use crate::error::InstanceError;
use crate::graph::{check_metric, CostMatrix, MatchingMode};
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
    alpha: 5.0 / 7.0,
    beta: 3.0 / 7.0,
};
pub const FIXED_BOUND: f64 = 3.5;
pub const DERANDOMIZED_BOUND: f64 = 3.034;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PctspStep {
    /// Full symmetric metric cost matrix.
    pub costs: Vec<Vec<f64>>,
    pub penalties: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsPctspInstance {
    pub vertices: usize,
    pub depot: usize,
    pub steps: Vec<PctspStep>,
    /// `transition[v]`: cost of visiting `v` at one step and not the next, or
    /// the other way round.
    pub transition: Vec<f64>,
}

impl MsPctspInstance {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.vertices;
        validate::horizon(self.steps.len())?;
        validate::vertex(|| "depot".into(), self.depot, n)?;
        for (t, step) in self.steps.iter().enumerate() {
            let field = format!("steps[{t}].costs");
            let opt: Vec<Vec<Option<f64>>> = step
                .costs
                .iter()
                .map(|r| r.iter().copied().map(Some).collect())
                .collect();
            crate::pcst::validate_costs(&field, &opt, n, false)?;
            if let Some((i, j, k)) = check_metric(&self.step_costs(t)) {
                return Err(InstanceError::invalid(
                    field,
                    format!("triangle inequality fails: c({i},{k}) > c({i},{j}) + c({j},{k})"),
                ));
            }
            let field = format!("steps[{t}].penalties");
            validate::len(&field, step.penalties.len(), n)?;
            validate::weights(&field, &step.penalties)?;
        }
        validate::len("transition", self.transition.len(), n)?;
        validate::weights("transition", &self.transition)?;
        Ok(())
    }

    pub fn step_costs(&self, t: usize) -> CostMatrix {
        let mut m = CostMatrix::zeros(self.vertices);
        for u in 0..self.vertices {
            for v in u + 1..self.vertices {
                m.set(u, v, self.steps[t].costs[u][v]);
            }
        }
        m
    }

    /// Penalty and transition parts of a schedule of visited-vertex sets.
    pub fn decision_costs(&self, visited: &[Vec<bool>]) -> CostBreakdown {
        let mut penalty = 0.0;
        for (t, row) in visited.iter().enumerate() {
            for v in (0..self.vertices).filter(|&v| v != self.depot && !row[v]) {
                penalty += self.steps[t].penalties[v];
            }
        }
        CostBreakdown {
            step: 0.0,
            penalty,
            transition: transition_cost(visited, |_, v| {
                if v == self.depot {
                    0.0
                } else {
                    self.transition[v]
                }
            }),
        }
    }
}

/// Rounds every non-depot vertex's series with `p`, then tours each step's
/// visited set with Christofides on the original costs.
pub fn round_with(
    inst: &MsPctspInstance,
    frac: &FractionalSolution,
    p: &RoundingParams,
    matching: MatchingMode,
) -> Result<RoundedSchedule> {
    let (n, big_t) = (inst.vertices, inst.horizon());
    let mut decisions = vec![vec![false; n]; big_t];
    for v in 0..n {
        if v == inst.depot {
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
        let subset: Vec<usize> = (0..n).filter(|&v| d[v]).collect();
        let tour = christofides_tour(&inst.step_costs(t), &subset, inst.depot, matching)?;
        cost.step += tour.length;
        structures.push(StepStructure::Tour(tour));
    }
    Ok(RoundedSchedule {
        decisions,
        structures,
        cost,
    })
}

pub fn solve_ms_pctsp(
    inst: &MsPctspInstance,
    mode: Mode,
    matching: MatchingMode,
    cfg: &LpConfig,
) -> Result<Solution> {
    inst.validate()?;
    let frac = pctsp_lp_solve(inst, cfg)?;
    let (schedule, params, gamma, bound) = match mode {
        Mode::Fixed => (round_with(inst, &frac, &FIXED, matching)?, FIXED, None, FIXED_BOUND),
        Mode::Derandomized => {
            let d = DerandomizationConfig::pctsp();
            let values = crate::pcst::non_root_values(&frac, inst.depot);
            let (s, p) =
                cheapest_over_candidates(&values, &d, |p| round_with(inst, &frac, p, matching))?;
            (s, p, Some(d.gamma), DERANDOMIZED_BOUND)
        }
    };
    let mut flags = Vec::new();
    if matching == MatchingMode::Greedy {
        flags.push("greedy_matching".to_string());
    }
    Ok(Solution {
        schedule,
        fractional: Some(frac),
        alpha: Some(params.alpha),
        beta: Some(params.beta),
        gamma,
        f: None,
        bound: (matching == MatchingMode::Blossom).then_some(bound),
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(points: &[(f64, f64)], penalties: Vec<Vec<f64>>, w: f64) -> MsPctspInstance {
        let n = points.len();
        MsPctspInstance {
            vertices: n,
            depot: 0,
            steps: penalties
                .into_iter()
                .map(|p| PctspStep {
                    costs: CostMatrix::from_points(points).rows(),
                    penalties: p,
                })
                .collect(),
            transition: vec![w; n],
        }
    }

    #[test]
    fn no_prizes_means_staying_home() {
        let inst = instance(&[(0.0, 0.0), (1.0, 0.0), (0.0, 2.0)], vec![vec![0.0; 3]; 2], 0.0);
        let frac = pctsp_lp_solve(&inst, &LpConfig::default()).unwrap();
        assert!(frac.lp_value.abs() < 1e-9);
        for t in 0..2 {
            assert_eq!(frac.x[t].len(), 1);
            let (u, v, x) = frac.x[t][0];
            assert_eq!((u, v), (0, 3));
            assert!((x - 2.0).abs() < 1e-9);
        }
        for mode in [Mode::Fixed, Mode::Derandomized] {
            let sol = solve_ms_pctsp(&inst, mode, MatchingMode::Blossom, &LpConfig::default()).unwrap();
            assert_eq!(sol.cost(), 0.0);
            assert!(sol
                .schedule
                .structures
                .iter()
                .all(|s| *s == StepStructure::Tour(crate::graph::Tour::trivial(0))));
        }
    }

    #[test]
    fn single_valuable_vertex_is_visited_every_step() {
        let inst = instance(&[(0.0, 0.0), (3.0, 4.0)], vec![vec![0.0, 1000.0]; 2], 1.0);
        let sol = solve_ms_pctsp(&inst, Mode::Fixed, MatchingMode::Blossom, &LpConfig::default()).unwrap();
        assert_eq!(sol.schedule.decisions, vec![vec![true, true]; 2]);
        assert_eq!(sol.cost(), 2.0 * 2.0 * 5.0);
        assert!((sol.lp_value().unwrap() - 20.0).abs() < 1e-6);
    }

    #[test]
    fn cuts_forbid_detached_cycles() {
        // a far triangle is worth visiting; without cuts the LP would close a
        // cycle among its vertices away from the depot
        let pts = [(0.0, 0.0), (20.0, 0.0), (21.0, 0.0), (20.0, 1.0)];
        let inst = instance(&pts, vec![vec![0.0, 100.0, 100.0, 100.0]], 0.0);
        let frac = pctsp_lp_solve(&inst, &LpConfig::default()).unwrap();
        assert!(frac.cuts_added > 0);
        for v in 1..4 {
            assert!(dummy_cut_value(&frac, 4, 0, v, 1.0) >= 2.0 * frac.s[0][v] - 1e-6);
        }
        let sol = solve_ms_pctsp(&inst, Mode::Fixed, MatchingMode::Blossom, &LpConfig::default()).unwrap();
        assert!(sol.cost() <= FIXED_BOUND * frac.lp_value + 1e-6);
    }

    #[test]
    fn greedy_matching_voids_the_bound() {
        let inst = instance(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], vec![vec![0.0, 9.0, 9.0]], 0.0);
        let sol = solve_ms_pctsp(&inst, Mode::Fixed, MatchingMode::Greedy, &LpConfig::default()).unwrap();
        assert_eq!(sol.bound, None);
        assert_eq!(sol.flags, vec!["greedy_matching".to_string()]);
    }

    #[test]
    fn non_metric_costs_are_rejected() {
        let mut inst = instance(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], vec![vec![0.0; 3]], 0.0);
        inst.steps[0].costs[0][2] = 5.0;
        inst.steps[0].costs[2][0] = 5.0;
        assert!(matches!(
            inst.validate(),
            Err(InstanceError::Validation { ref field, .. }) if field == "steps[0].costs"
        ));
    }
}
