use super::{Instance, InstanceFile, Problem};
use crate::graph::MatchingMode;
use crate::lp::LpConfig;
use crate::oracle::{oracle_mincut, oracle_pcst, oracle_pctsp, oracle_setcover, oracle_vertexcover};
use crate::schedule::{CostBreakdown, Mode, RoundedSchedule, Solution, StepStructure};
use crate::{mincut, pcst, pctsp, set_cover, vertex_cover, Result};
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Lower bounds this close to zero are treated as zero when forming ratios.
const RATIO_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub mode: Mode,
    pub matching: MatchingMode,
    /// Also run the brute-force oracle and report the ratio against it.
    pub with_oracle: bool,
    pub lp: LpConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub id: String,
    pub problem: Problem,
    pub algorithm: String,
    pub mode: Option<Mode>,
    pub matching: Option<MatchingMode>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub f: Option<usize>,
    /// LP optimum, a lower bound on the optimal cost.
    pub lp_value: Option<f64>,
    pub cost: f64,
    pub breakdown: CostBreakdown,
    pub ratio_vs_lp: Option<f64>,
    pub oracle_cost: Option<f64>,
    pub ratio_vs_oracle: Option<f64>,
    /// Proven bound on `cost / lp_value` (or `cost / optimum` for exact solvers).
    pub bound: Option<f64>,
    pub cut_rounds: Option<usize>,
    pub cuts_added: Option<usize>,
    pub exact_fallback: bool,
    pub flags: Vec<String>,
    pub wall_time_ms: f64,
    pub decisions: Vec<Vec<bool>>,
    pub structures: Vec<StepStructure>,
}

/// `cost / lower`, with `0 / 0 = 1`; `None` when only the bound is zero.
pub fn ratio(cost: f64, lower: f64) -> Option<f64> {
    if lower.abs() <= RATIO_FLOOR {
        (cost.abs() <= RATIO_FLOOR).then_some(1.0)
    } else {
        Some(cost / lower)
    }
}

fn algorithm(p: Problem) -> &'static str {
    match p {
        Problem::Mincut => "time_expanded_cut",
        Problem::Vertexcover => "lp_half_integral",
        Problem::Setcover => "lp_two_threshold",
        Problem::Pcst => "lp_two_threshold_gw",
        Problem::Pctsp => "lp_two_threshold_christofides",
    }
}

pub fn brute_force_schedule(inst: &Instance) -> Result<RoundedSchedule> {
    match inst {
        Instance::Mincut(i) => oracle_mincut(i),
        Instance::Vertexcover(i) => oracle_vertexcover(i),
        Instance::Setcover(i) => oracle_setcover(i),
        Instance::Pcst(i) => oracle_pcst(i),
        Instance::Pctsp(i) => oracle_pctsp(i),
    }
}

pub fn solve_instance(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    match inst {
        Instance::Mincut(i) => mincut::solve_ms_mincut(i),
        Instance::Vertexcover(i) => vertex_cover::solve_ms_vertexcover(i, &opts.lp),
        Instance::Setcover(i) => set_cover::solve_ms_setcover(i, &opts.lp),
        Instance::Pcst(i) => pcst::solve_ms_pcst(i, opts.mode, &opts.lp),
        Instance::Pctsp(i) => pctsp::solve_ms_pctsp(i, opts.mode, opts.matching, &opts.lp),
    }
}

pub fn solve_report(file: &InstanceFile, opts: &SolveOptions) -> Result<SolveReport> {
    let problem = file.instance.problem();
    let start = Instant::now();
    let sol = solve_instance(&file.instance, opts)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let oracle_cost = if opts.with_oracle {
        Some(brute_force_schedule(&file.instance)?.total_cost() + 0.0)
    } else {
        None
    };
    let cost = sol.cost() + 0.0;
    let lp_value = sol.lp_value();
    let prize = matches!(problem, Problem::Pcst | Problem::Pctsp);
    let mut flags = sol.flags.clone();
    if sol.fractional.as_ref().is_some_and(|f| f.exact_fallback) {
        flags.push("exact_lp_fallback".to_string());
    }
    Ok(SolveReport {
        id: file.id.clone(),
        problem,
        algorithm: algorithm(problem).to_string(),
        mode: prize.then_some(opts.mode),
        matching: (problem == Problem::Pctsp).then_some(opts.matching),
        alpha: sol.alpha,
        beta: sol.beta,
        gamma: sol.gamma,
        f: sol.f,
        lp_value,
        cost,
        breakdown: sol.schedule.cost.normalized(),
        ratio_vs_lp: lp_value.and_then(|lb| ratio(cost, lb)),
        oracle_cost,
        ratio_vs_oracle: oracle_cost.and_then(|o| ratio(cost, o)),
        bound: sol.bound,
        cut_rounds: sol.fractional.as_ref().filter(|_| prize).map(|f| f.cut_rounds),
        cuts_added: sol.fractional.as_ref().filter(|_| prize).map(|f| f.cuts_added),
        exact_fallback: sol.fractional.as_ref().is_some_and(|f| f.exact_fallback),
        flags,
        wall_time_ms,
        decisions: sol.schedule.decisions,
        structures: sol.schedule.structures,
    })
}

pub fn oracle_report(file: &InstanceFile) -> Result<SolveReport> {
    let start = Instant::now();
    let s = brute_force_schedule(&file.instance)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(SolveReport {
        id: file.id.clone(),
        problem: file.instance.problem(),
        algorithm: "brute_force".to_string(),
        mode: None,
        matching: None,
        alpha: None,
        beta: None,
        gamma: None,
        f: None,
        lp_value: None,
        cost: s.total_cost() + 0.0,
        breakdown: s.cost.normalized(),
        ratio_vs_lp: None,
        oracle_cost: Some(s.total_cost() + 0.0),
        ratio_vs_oracle: Some(1.0),
        bound: Some(1.0),
        cut_rounds: None,
        cuts_added: None,
        exact_fallback: false,
        flags: Vec::new(),
        wall_time_ms,
        decisions: s.decisions,
        structures: s.structures,
    })
}

#[cfg(test)]
mod tests {
    use super::super::generate_instance;
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(ratio(0.0, 0.0), Some(1.0));
        assert_eq!(ratio(1.0, 0.0), None);
        assert_eq!(ratio(3.0, 2.0), Some(1.5));
    }

    #[test]
    fn report_is_consistent() {
        for p in Problem::ALL {
            let f = generate_instance(p, 4, 2, 3, 0.2);
            let opts = SolveOptions {
                with_oracle: true,
                ..Default::default()
            };
            let r = solve_report(&f, &opts).unwrap();
            assert!((r.breakdown.total() - r.cost).abs() < 1e-9);
            assert!(r.ratio_vs_oracle.unwrap() >= 1.0 - 1e-9);
            if let Some(q) = r.ratio_vs_lp {
                assert!(q >= 1.0 - 1e-6);
            }
            let o = oracle_report(&f).unwrap();
            assert!((o.cost - r.oracle_cost.unwrap()).abs() < 1e-12);
        }
    }
}
