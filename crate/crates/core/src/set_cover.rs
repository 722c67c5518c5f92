//! Multistage f-set cover with two-threshold rounding at `1/f`, `1/(2f)`.

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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScStep {
    /// Elements that must be covered at this step.
    pub ground: Vec<usize>,
    /// `members[i]`: elements of set `i` at this step.
    pub members: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsScInstance {
    pub elements: usize,
    pub sets: usize,
    pub steps: Vec<ScStep>,
    /// `penalties[i]`: cost of changing the decision on set `i` between two steps.
    pub penalties: Vec<f64>,
}

impl MsScInstance {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        validate::horizon(self.steps.len())?;
        for (t, step) in self.steps.iter().enumerate() {
            for (k, &e) in step.ground.iter().enumerate() {
                if e >= self.elements {
                    return Err(InstanceError::invalid(
                        format!("steps[{t}].ground[{k}]"),
                        format!("element {e} out of range ({} elements)", self.elements),
                    ));
                }
            }
            validate::len(&format!("steps[{t}].members"), step.members.len(), self.sets)?;
            for (i, set) in step.members.iter().enumerate() {
                for (k, &e) in set.iter().enumerate() {
                    if e >= self.elements {
                        return Err(InstanceError::invalid(
                            format!("steps[{t}].members[{i}][{k}]"),
                            format!("element {e} out of range ({} elements)", self.elements),
                        ));
                    }
                }
            }
            let field = format!("steps[{t}].weights");
            validate::len(&field, step.weights.len(), self.sets)?;
            validate::weights(&field, &step.weights)?;
        }
        validate::len("penalties", self.penalties.len(), self.sets)?;
        validate::weights("penalties", &self.penalties)?;
        Ok(())
    }

    /// Sets containing `element` at step `t`.
    pub fn covering(&self, t: usize, element: usize) -> Vec<usize> {
        (0..self.sets)
            .filter(|&i| self.steps[t].members[i].contains(&element))
            .collect()
    }

    /// Largest number of sets any required element belongs to.
    pub fn frequency(&self) -> Result<usize> {
        let mut f = 0;
        for (t, step) in self.steps.iter().enumerate() {
            for &e in &step.ground {
                let k = self.covering(t, e).len();
                if k == 0 {
                    return Err(Error::UncoverableElement { step: t, element: e });
                }
                f = f.max(k);
            }
        }
        Ok(f)
    }

    pub fn is_cover(&self, t: usize, chosen: &[bool]) -> bool {
        self.steps[t]
            .ground
            .iter()
            .all(|&e| self.covering(t, e).iter().any(|&i| chosen[i]))
    }

    pub fn evaluate(&self, chosen: &[Vec<bool>]) -> CostBreakdown {
        let step = self
            .steps
            .iter()
            .zip(chosen)
            .map(|(s, c)| (0..self.sets).filter(|&i| c[i]).map(|i| s.weights[i]).sum::<f64>())
            .sum();
        CostBreakdown {
            step,
            penalty: 0.0,
            transition: transition_cost(chosen, |_, i| self.penalties[i]),
        }
    }
}

/// Variable `x[t][i]` is `t * m + i`; `z[t][i]` follows all `x`.
pub fn build_lp(inst: &MsScInstance) -> LpModel {
    let (m, big_t) = (inst.sets, inst.horizon());
    let mut lp = LpModel::new();
    for step in &inst.steps {
        for &w in &step.weights {
            lp.add_var(w);
        }
    }
    for _ in 1..big_t {
        for &p in &inst.penalties {
            lp.add_var(p);
        }
    }
    for (t, step) in inst.steps.iter().enumerate() {
        let mut ground = step.ground.clone();
        ground.sort_unstable();
        ground.dedup();
        for e in ground {
            let coeffs = inst.covering(t, e).into_iter().map(|i| (t * m + i, 1.0)).collect();
            lp.add_row(Row::ge(coeffs, 1.0));
        }
    }
    for t in 0..big_t.saturating_sub(1) {
        for i in 0..m {
            let (z, a, b) = (m * big_t + t * m + i, t * m + i, (t + 1) * m + i);
            lp.add_row(Row::ge(vec![(z, 1.0), (a, -1.0), (b, 1.0)], 0.0));
            lp.add_row(Row::ge(vec![(z, 1.0), (a, 1.0), (b, -1.0)], 0.0));
        }
    }
    lp
}

pub fn lp_solve(inst: &MsScInstance, cfg: &LpConfig) -> Result<FractionalSolution> {
    let (m, big_t) = (inst.sets, inst.horizon());
    let sol = solve_lp_with(&build_lp(inst), cfg)?;
    if !sol.is_optimal() {
        return Err(Error::LpNotOptimal("infeasible or unbounded"));
    }
    let s: Vec<Vec<f64>> = (0..big_t)
        .map(|t| sol.values[t * m..(t + 1) * m].to_vec())
        .collect();
    let z: Vec<Vec<f64>> = (0..big_t.saturating_sub(1))
        .map(|t| sol.values[m * big_t + t * m..m * big_t + (t + 1) * m].to_vec())
        .collect();
    let step = (0..big_t)
        .map(|t| (0..m).map(|i| inst.steps[t].weights[i] * s[t][i]).sum::<f64>())
        .sum();
    let transition = z
        .iter()
        .map(|row| row.iter().zip(&inst.penalties).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    Ok(FractionalSolution {
        s,
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

pub fn solve_ms_setcover(inst: &MsScInstance, cfg: &LpConfig) -> Result<Solution> {
    inst.validate()?;
    let f = inst.frequency()?;
    let (m, big_t) = (inst.sets, inst.horizon());
    let frac = lp_solve(inst, cfg)?;
    let params = RoundingParams::set_cover(f);
    let mut chosen = vec![vec![false; m]; big_t];
    for i in 0..m {
        let y = two_threshold_round(&series(&frac.s, i), &params)?;
        for t in 0..big_t {
            chosen[t][i] = y[t];
        }
    }
    let mut flags = Vec::new();
    // The LP guarantees some covering set reaches 1/f; only numerical noise
    // beyond the rounding epsilon can leave an element bare.
    for t in 0..big_t {
        for &e in &inst.steps[t].ground {
            let cover = inst.covering(t, e);
            if !cover.iter().any(|&i| chosen[t][i]) {
                let best = cover
                    .into_iter()
                    .max_by(|&a, &b| frac.s[t][a].total_cmp(&frac.s[t][b]))
                    .expect("frequency() rejects uncoverable elements");
                chosen[t][best] = true;
                if !flags.iter().any(|f| f == "coverage_repair") {
                    flags.push("coverage_repair".to_string());
                }
            }
        }
    }
    let structures = chosen
        .iter()
        .map(|c| StepStructure::Collection {
            sets: (0..m).filter(|&i| c[i]).collect(),
        })
        .collect();
    let cost = inst.evaluate(&chosen);
    Ok(Solution {
        schedule: RoundedSchedule {
            decisions: chosen,
            structures,
            cost,
        },
        fractional: Some(frac),
        alpha: Some(params.alpha),
        beta: Some(params.beta),
        gamma: None,
        f: Some(f),
        bound: Some(2.0 * f.max(1) as f64),
        flags,
    })
}
