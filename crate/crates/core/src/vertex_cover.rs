//! Multistage vertex cover: LP relaxation, half-integral rounding.

use crate::error::InstanceError;
use crate::lp::{solve_lp_with, LpConfig, LpModel, Row};
use crate::rounding::{two_threshold_round, RoundingParams};
use crate::schedule::{
    series, transition_cost, CostBreakdown, FractionalSolution, RoundedSchedule, Solution,
    StepStructure,
};
use crate::validate;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest distance from {0, 1/2, 1} still treated as half-integral.
pub const SNAP_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VcStep {
    pub edges: Vec<(usize, usize)>,
    /// Vertex weights at this step.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsVcInstance {
    pub vertices: usize,
    pub steps: Vec<VcStep>,
    /// `transition[t][v]`: cost of changing `v`'s membership between `t` and `t + 1`.
    pub transition: Vec<Vec<f64>>,
}

impl MsVcInstance {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.vertices;
        validate::horizon(self.steps.len())?;
        for (t, step) in self.steps.iter().enumerate() {
            for (k, &(u, v)) in step.edges.iter().enumerate() {
                let field = || format!("steps[{t}].edges[{k}]");
                validate::vertex(field, u, n)?;
                validate::vertex(field, v, n)?;
                if u == v {
                    return Err(InstanceError::invalid(field(), "self-loop"));
                }
            }
            let field = format!("steps[{t}].weights");
            validate::len(&field, step.weights.len(), n)?;
            validate::weights(&field, &step.weights)?;
        }
        validate::len("transition", self.transition.len(), self.horizon() - 1)?;
        for (t, row) in self.transition.iter().enumerate() {
            let field = format!("transition[{t}]");
            validate::len(&field, row.len(), n)?;
            validate::weights(&field, row)?;
        }
        Ok(())
    }

    pub fn is_cover(&self, t: usize, chosen: &[bool]) -> bool {
        self.steps[t].edges.iter().all(|&(u, v)| chosen[u] || chosen[v])
    }

    pub fn evaluate(&self, covers: &[Vec<bool>]) -> CostBreakdown {
        let step = self
            .steps
            .iter()
            .zip(covers)
            .map(|(s, c)| (0..self.vertices).filter(|&v| c[v]).map(|v| s.weights[v]).sum::<f64>())
            .sum();
        CostBreakdown {
            step,
            penalty: 0.0,
            transition: transition_cost(covers, |t, v| self.transition[t][v]),
        }
    }
}

/// Variable `x[t][v]` is `t * n + v`; `z[t][v]` follows all `x`.
pub fn build_lp(inst: &MsVcInstance) -> LpModel {
    let (n, big_t) = (inst.vertices, inst.horizon());
    let mut m = LpModel::new();
    for step in &inst.steps {
        for &w in &step.weights {
            m.add_var(w);
        }
    }
    for row in &inst.transition {
        for &w in row {
            m.add_var(w);
        }
    }
    for (t, step) in inst.steps.iter().enumerate() {
        for &(u, v) in &step.edges {
            m.add_row(Row::ge(vec![(t * n + u, 1.0), (t * n + v, 1.0)], 1.0));
        }
    }
    for t in 0..big_t.saturating_sub(1) {
        for v in 0..n {
            let (z, a, b) = (n * big_t + t * n + v, t * n + v, (t + 1) * n + v);
            m.add_row(Row::ge(vec![(z, 1.0), (a, -1.0), (b, 1.0)], 0.0));
            m.add_row(Row::ge(vec![(z, 1.0), (a, 1.0), (b, -1.0)], 0.0));
        }
    }
    m
}

fn snap(x: f64) -> Option<f64> {
    [0.0, 0.5, 1.0]
        .into_iter()
        .find(|&h| (x - h).abs() <= SNAP_TOL)
}

pub fn lp_solve(inst: &MsVcInstance, cfg: &LpConfig) -> Result<FractionalSolution> {
    let (n, big_t) = (inst.vertices, inst.horizon());
    let model = build_lp(inst);
    let sol = solve_lp_with(&model, cfg)?;
    if !sol.is_optimal() {
        return Err(Error::LpNotOptimal("infeasible or unbounded"));
    }
    let s: Vec<Vec<f64>> = sol.values[..n * big_t].chunks(n.max(1)).map(<[f64]>::to_vec).collect();
    let z: Vec<Vec<f64>> = sol.values[n * big_t..]
        .chunks(n.max(1))
        .map(<[f64]>::to_vec)
        .collect();
    let step: f64 = (0..big_t)
        .map(|t| (0..n).map(|v| inst.steps[t].weights[v] * s[t][v]).sum::<f64>())
        .sum();
    let transition: f64 = z
        .iter()
        .enumerate()
        .map(|(t, row)| row.iter().zip(&inst.transition[t]).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    Ok(FractionalSolution {
        s: if n == 0 { vec![Vec::new(); big_t] } else { s },
        x: vec![Vec::new(); big_t],
        z,
        lp_value: sol.objective_value,
        parts: CostBreakdown {
            step,
            penalty: 0.0,
            transition,
        },
        cut_rounds: 1,
        cuts_added: 0,
        exact_fallback: sol.exact_fallback,
    })
}

/// Whether every LP coordinate is within [`SNAP_TOL`] of {0, 1/2, 1}.
pub fn is_half_integral(frac: &FractionalSolution) -> bool {
    frac.s.iter().chain(&frac.z).flatten().all(|&v| snap(v).is_some())
}

pub fn solve_ms_vertexcover(inst: &MsVcInstance, cfg: &LpConfig) -> Result<Solution> {
    inst.validate()?;
    let (n, big_t) = (inst.vertices, inst.horizon());
    let frac = lp_solve(inst, cfg)?;
    let mut flags = Vec::new();
    let (decisions, params, bound) = if is_half_integral(&frac) {
        let d: Vec<Vec<bool>> = frac
            .s
            .iter()
            .map(|row| row.iter().map(|&x| snap(x).unwrap() >= 0.5).collect())
            .collect();
        (d, None, 2.0)
    } else {
        flags.push("half_integrality_violation".to_string());
        let p = RoundingParams {
            alpha: 0.5,
            beta: 0.25,
        };
        let mut d = vec![vec![false; n]; big_t];
        for v in 0..n {
            let y = two_threshold_round(&series(&frac.s, v), &p)?;
            for t in 0..big_t {
                d[t][v] = y[t];
            }
        }
        (d, Some(p), 4.0)
    };
    let structures = decisions
        .iter()
        .map(|d| StepStructure::Cover {
            vertices: (0..n).filter(|&v| d[v]).collect(),
        })
        .collect();
    let cost = inst.evaluate(&decisions);
    Ok(Solution {
        schedule: RoundedSchedule {
            decisions,
            structures,
            cost,
        },
        fractional: Some(frac),
        alpha: params.map(|p| p.alpha),
        beta: params.map(|p| p.beta),
        gamma: None,
        f: None,
        bound: Some(bound),
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(steps: Vec<VcStep>, w: f64) -> MsVcInstance {
        let n = steps[0].weights.len();
        let t = steps.len();
        MsVcInstance {
            vertices: n,
            steps,
            transition: vec![vec![w; n]; t - 1],
        }
    }

    #[test]
    fn single_edge_is_the_half_integral_worst_case() {
        let i = inst(
            vec![VcStep {
                edges: vec![(0, 1)],
                weights: vec![1.0, 1.0],
            }],
            0.0,
        );
        let sol = solve_ms_vertexcover(&i, &LpConfig::default()).unwrap();
        assert!((sol.lp_value().unwrap() - 1.0).abs() < 1e-9);
        assert!(sol.flags.is_empty());
        assert!(sol.cost() <= 2.0 + 1e-9);
        assert!(i.is_cover(0, &sol.schedule.decisions[0]));
    }

    #[test]
    fn identical_triangles_keep_the_cover() {
        let tri = VcStep {
            edges: vec![(0, 1), (1, 2), (0, 2)],
            weights: vec![1.0, 2.0, 3.0],
        };
        let i = inst(vec![tri.clone(), tri], 1000.0);
        let sol = solve_ms_vertexcover(&i, &LpConfig::default()).unwrap();
        let d = &sol.schedule.decisions;
        assert_eq!(d[0], d[1]);
        assert!(i.is_cover(0, &d[0]));
        // optimum covers {0, 1} at both steps: cost 6
        assert!(sol.cost() <= 2.0 * 6.0 + 1e-9);
        assert_eq!(sol.schedule.cost.transition, 0.0);
    }

    #[test]
    fn rounding_is_coordinatewise_within_factor_two() {
        let i = inst(
            vec![
                VcStep {
                    edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
                    weights: vec![1.0, 1.0, 1.0, 1.0],
                },
                VcStep {
                    edges: vec![(0, 2), (1, 3)],
                    weights: vec![2.0, 1.0, 1.0, 2.0],
                },
            ],
            0.5,
        );
        let sol = solve_ms_vertexcover(&i, &LpConfig::default()).unwrap();
        let frac = sol.fractional.as_ref().unwrap();
        for (t, row) in sol.schedule.decisions.iter().enumerate() {
            assert!(i.is_cover(t, row));
            for (v, &b) in row.iter().enumerate() {
                assert!(b as u8 as f64 <= 2.0 * frac.s[t][v] + 1e-9);
            }
        }
        assert!(sol.cost() <= 2.0 * sol.lp_value().unwrap() + 1e-9);
    }
}
