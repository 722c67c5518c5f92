//! Linear programs over bounded variables.
//!
//! [`solve_lp`] runs a bounded-variable primal simplex in double precision and
//! always returns a basic (vertex) optimum. If the floating-point run exhausts
//! its pivot budget or its vertex fails re-verification against the original
//! rows, the same pivoting code is re-run over exact rationals.
//!
//! [`solve_with_separation`] wraps the solver in a cutting-plane loop for
//! constraint families too large to list.

mod cutting;
mod simplex;
mod text;

pub use cutting::{solve_with_separation, SeparatedSolution, SeparationOracle, ViolatedRow};

use crate::error::LpError;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Number of Dantzig (most negative reduced cost) pivots per phase before the
/// solver switches to Bland's smallest-index rule, which cannot cycle.
pub const DANTZIG_PIVOT_LIMIT: usize = 400;

/// Hard pivot budget per phase. Exceeding it yields [`LpError::NumericalFailure`].
pub const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// A sparse linear row `sum coeffs <relation> rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Row {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn ge(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Ge, rhs)
    }

    pub fn le(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Le, rhs)
    }

    pub fn eq(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row::new(coeffs, Relation::Eq, rhs)
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * values[j]).sum()
    }

    /// Amount by which `values` violate the row; zero or negative when satisfied.
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.relation {
            Relation::Ge => self.rhs - lhs,
            Relation::Le => lhs - self.rhs,
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Minimize `objective . x` subject to `rows` and per-variable bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    /// `[lo, hi]` per variable; `hi` may be `f64::INFINITY`.
    pub bounds: Vec<(f64, f64)>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds a variable with bounds `[0, 1]` and returns its index.
    pub fn add_var(&mut self, cost: f64) -> usize {
        self.add_bounded_var(cost, 0.0, 1.0)
    }

    pub fn add_bounded_var(&mut self, cost: f64, lo: f64, hi: f64) -> usize {
        self.objective.push(cost);
        self.bounds.push((lo, hi));
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(LpError::MalformedModel(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (j, &c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::MalformedModel(format!("objective[{j}] = {c}")));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || hi.is_nan() || lo > hi {
                return Err(LpError::MalformedModel(format!(
                    "variable {j} has bounds [{lo}, {hi}]"
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::MalformedModel(format!("row {i} rhs = {}", row.rhs)));
            }
            for &(j, a) in &row.coeffs {
                if j >= n {
                    return Err(LpError::MalformedModel(format!(
                        "row {i} references variable {j} of {n}"
                    )));
                }
                if !a.is_finite() {
                    return Err(LpError::MalformedModel(format!("row {i} coefficient {a}")));
                }
            }
        }
        Ok(())
    }

    /// Largest row violation and largest bound violation of `values`.
    pub fn max_violation(&self, values: &[f64]) -> (f64, f64) {
        let rows = self
            .rows
            .iter()
            .map(|r| r.violation(values))
            .fold(0.0_f64, f64::max);
        let bounds = self
            .bounds
            .iter()
            .zip(values)
            .map(|(&(lo, hi), &x)| (lo - x).max(x - hi))
            .fold(0.0_f64, f64::max);
        (rows, bounds)
    }

    /// Human-readable dump, one row per line.
    pub fn to_lp_text(&self) -> String {
        text::write_lp(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Set when the answer came from the exact rational path.
    pub exact_fallback: bool,
    /// Basic variables of the final basis, structural ones only.
    pub basis: Vec<usize>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Double precision, re-solving exactly on numerical trouble.
    Float,
    /// Exact rationals from the start.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpConfig {
    pub feasibility_tol: f64,
    pub separation_tol: f64,
    pub optimality_tol: f64,
    pub bound_tol: f64,
    pub pivot_tol: f64,
    pub dantzig_pivots: usize,
    pub max_pivots: usize,
    pub arithmetic: Arithmetic,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            feasibility_tol: 1e-7,
            separation_tol: 1e-6,
            optimality_tol: 1e-9,
            bound_tol: 1e-9,
            pivot_tol: 1e-9,
            dantzig_pivots: DANTZIG_PIVOT_LIMIT,
            max_pivots: MAX_PIVOTS,
            arithmetic: Arithmetic::Float,
        }
    }
}

pub const ENV_FEASIBILITY_TOL: &str = "MSOPT_FEASIBILITY_TOL";
pub const ENV_SEPARATION_TOL: &str = "MSOPT_SEPARATION_TOL";
pub const ENV_OPTIMALITY_TOL: &str = "MSOPT_OPTIMALITY_TOL";

impl LpConfig {
    /// Defaults, overridden by `MSOPT_FEASIBILITY_TOL`, `MSOPT_SEPARATION_TOL`
    /// and `MSOPT_OPTIMALITY_TOL` when set.
    pub fn from_env() -> Result<Self, String> {
        let mut cfg = LpConfig::default();
        for (name, slot) in [
            (ENV_FEASIBILITY_TOL, &mut cfg.feasibility_tol),
            (ENV_SEPARATION_TOL, &mut cfg.separation_tol),
            (ENV_OPTIMALITY_TOL, &mut cfg.optimality_tol),
        ] {
            if let Ok(raw) = std::env::var(name) {
                let v: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| format!("{name}={raw} is not a number"))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(format!("{name}={raw} must be a positive finite number"));
                }
                *slot = v;
            }
        }
        Ok(cfg)
    }
}

/// Solves `model` with default tolerances.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution, LpError> {
    solve_lp_with(model, &LpConfig::default())
}

pub fn solve_lp_with(model: &LpModel, cfg: &LpConfig) -> Result<LpSolution, LpError> {
    model.validate()?;
    if cfg.arithmetic == Arithmetic::Exact {
        return solve_exact(model, cfg);
    }
    match simplex::solve::<f64>(model, cfg) {
        Ok(raw) => match finish_float(model, cfg, raw) {
            Some(sol) => Ok(sol),
            None => solve_exact(model, cfg),
        },
        Err(LpError::NumericalFailure { .. }) => solve_exact(model, cfg),
        Err(e) => Err(e),
    }
}

fn solve_exact(model: &LpModel, cfg: &LpConfig) -> Result<LpSolution, LpError> {
    let raw = simplex::solve::<BigRational>(model, cfg)?;
    let mut sol = into_solution(model, raw);
    sol.exact_fallback = true;
    Ok(sol)
}

fn into_solution(model: &LpModel, raw: simplex::RawSolution) -> LpSolution {
    let objective_value = match raw.status {
        LpStatus::Optimal => model.objective_value(&raw.values),
        LpStatus::Infeasible => f64::INFINITY,
        LpStatus::Unbounded => f64::NEG_INFINITY,
    };
    LpSolution {
        status: raw.status,
        values: raw.values,
        objective_value,
        exact_fallback: false,
        basis: raw.basis,
    }
}

/// Snaps tiny bound excursions and re-verifies the vertex against the
/// original rows. `None` asks for the exact path.
fn finish_float(model: &LpModel, cfg: &LpConfig, mut raw: simplex::RawSolution) -> Option<LpSolution> {
    if raw.status != LpStatus::Optimal {
        return Some(into_solution(model, raw));
    }
    for (x, &(lo, hi)) in raw.values.iter_mut().zip(&model.bounds) {
        if *x < lo {
            if lo - *x > cfg.bound_tol * 10.0 {
                return None;
            }
            *x = lo;
        } else if *x > hi {
            if *x - hi > cfg.bound_tol * 10.0 {
                return None;
            }
            *x = hi;
        }
    }
    let (row_viol, _) = model.max_violation(&raw.values);
    if row_viol > cfg.feasibility_tol {
        return None;
    }
    Some(into_solution(model, raw))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_bound() {
        let mut m = LpModel::new();
        let x = m.add_var(1.0);
        m.add_row(Row::ge(vec![(x, 1.0)], 0.5));
        let sol = solve_lp(&m).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.values[0] - 0.5).abs() < 1e-12);
        assert!((sol.objective_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn returns_a_vertex_not_an_interior_face_point() {
        let mut m = LpModel::new();
        let x = m.add_var(1.0);
        let y = m.add_var(1.0);
        m.add_row(Row::ge(vec![(x, 1.0), (y, 1.0)], 1.0));
        let sol = solve_lp(&m).unwrap();
        assert!((sol.objective_value - 1.0).abs() < 1e-12);
        let v = (sol.values[0], sol.values[1]);
        assert!(v == (1.0, 0.0) || v == (0.0, 1.0), "got {v:?}");
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut m = LpModel::new();
        let x = m.add_var(1.0);
        m.add_row(Row::ge(vec![(x, 1.0)], 2.0));
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);

        let mut m = LpModel::new();
        let x = m.add_bounded_var(-1.0, 0.0, f64::INFINITY);
        let y = m.add_var(0.0);
        m.add_row(Row::ge(vec![(x, 1.0), (y, -1.0)], 0.0));
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn malformed_models_are_rejected() {
        let mut m = LpModel::new();
        m.add_var(1.0);
        m.add_row(Row::ge(vec![(3, 1.0)], 0.0));
        assert!(matches!(solve_lp(&m), Err(LpError::MalformedModel(_))));

        let mut m = LpModel::new();
        m.add_bounded_var(1.0, 1.0, 0.0);
        assert!(matches!(solve_lp(&m), Err(LpError::MalformedModel(_))));

        let mut m = LpModel::new();
        m.add_var(1.0);
        m.bounds.pop();
        assert!(matches!(solve_lp(&m), Err(LpError::MalformedModel(_))));
    }

    #[test]
    fn equality_rows_and_upper_bounds() {
        // max x + 2y  s.t. x + y = 1.5, x,y in [0,1]  -> y = 1, x = 0.5
        let mut m = LpModel::new();
        let x = m.add_var(-1.0);
        let y = m.add_var(-2.0);
        m.add_row(Row::eq(vec![(x, 1.0), (y, 1.0)], 1.5));
        let sol = solve_lp(&m).unwrap();
        assert!((sol.values[x] - 0.5).abs() < 1e-12);
        assert!((sol.values[y] - 1.0).abs() < 1e-12);
        assert!((sol.objective_value + 2.5).abs() < 1e-12);
    }

    #[test]
    fn exact_path_agrees_with_float_path() {
        let mut m = LpModel::new();
        let v: Vec<usize> = (0..4).map(|i| m.add_var(1.0 + i as f64 * 0.25)).collect();
        m.add_row(Row::ge(vec![(v[0], 1.0), (v[1], 1.0)], 1.0));
        m.add_row(Row::ge(vec![(v[1], 1.0), (v[2], 1.0)], 1.0));
        m.add_row(Row::ge(vec![(v[2], 1.0), (v[3], 1.0)], 1.0));
        m.add_row(Row::ge(vec![(v[3], 1.0), (v[0], 1.0)], 1.0));
        let float = solve_lp(&m).unwrap();
        let cfg = LpConfig {
            arithmetic: Arithmetic::Exact,
            ..LpConfig::default()
        };
        let exact = solve_lp_with(&m, &cfg).unwrap();
        assert!(exact.exact_fallback);
        assert!((float.objective_value - exact.objective_value).abs() < 1e-12);
    }

    #[test]
    fn env_overrides_are_parsed() {
        std::env::set_var(ENV_SEPARATION_TOL, "1e-5");
        let cfg = LpConfig::from_env().unwrap();
        assert_eq!(cfg.separation_tol, 1e-5);
        std::env::set_var(ENV_SEPARATION_TOL, "nope");
        assert!(LpConfig::from_env().is_err());
        std::env::remove_var(ENV_SEPARATION_TOL);
    }
}
