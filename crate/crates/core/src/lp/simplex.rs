//! Dense-tableau bounded-variable primal simplex, generic over the scalar
//! field so that the same pivoting code runs in `f64` and in exact rationals.

use super::{LpConfig, LpModel, LpStatus, Relation};
use crate::error::LpError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;

pub(crate) trait Field: Clone + PartialOrd + Debug + Signed {
    const EXACT: bool;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// The tolerance `eps` in this field; exact fields compare exactly.
    fn tol(eps: f64) -> Self;
}

impl Field for f64 {
    const EXACT: bool = false;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tol(eps: f64) -> Self {
        eps
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn tol(_eps: f64) -> Self {
        BigRational::zero()
    }
}

pub(crate) struct RawSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub basis: Vec<usize>,
}

struct Tols<F> {
    pivot: F,
    optimality: F,
    feasibility: F,
    tie: F,
}

struct Tableau<F> {
    m: usize,
    n_struct: usize,
    n_cols: usize,
    art_start: usize,
    /// Row-major `m x n_cols` matrix `B^-1 A`.
    a: Vec<F>,
    xb: Vec<F>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    lower: Vec<F>,
    upper: Vec<Option<F>>,
    at_upper: Vec<bool>,
    may_enter: Vec<bool>,
    cost: Vec<F>,
    reduced: Vec<F>,
    sigma: Vec<F>,
    /// Original rows with slack and artificial columns, for the final refresh.
    original: Vec<Vec<(usize, F)>>,
    rhs: Vec<F>,
    tols: Tols<F>,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

pub(crate) fn solve<F: Field>(model: &LpModel, cfg: &LpConfig) -> Result<RawSolution, LpError> {
    let mut t = Tableau::<F>::build(model, cfg);
    if t.has_active_artificials() {
        t.set_phase_one_costs();
        t.run(cfg)?;
        if t.infeasibility() > t.tols.feasibility {
            return Ok(RawSolution {
                status: LpStatus::Infeasible,
                values: vec![f64::NAN; model.n_vars()],
                basis: Vec::new(),
            });
        }
        t.retire_artificials();
    }
    t.set_phase_two_costs(model);
    match t.run(cfg)? {
        LpStatus::Unbounded => Ok(RawSolution {
            status: LpStatus::Unbounded,
            values: vec![f64::NAN; model.n_vars()],
            basis: Vec::new(),
        }),
        _ => {
            if !F::EXACT {
                t.refresh_basic_values();
            }
            Ok(t.extract())
        }
    }
}

impl<F: Field> Tableau<F> {
    fn build(model: &LpModel, cfg: &LpConfig) -> Self {
        let m = model.rows.len();
        let n_struct = model.n_vars();
        let n_slack = model
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let art_start = n_struct + n_slack;
        let n_cols = art_start + m;

        let mut lower: Vec<F> = Vec::with_capacity(n_cols);
        let mut upper: Vec<Option<F>> = Vec::with_capacity(n_cols);
        for &(lo, hi) in &model.bounds {
            lower.push(F::from_f64(lo));
            upper.push(if hi.is_finite() { Some(F::from_f64(hi)) } else { None });
        }
        for _ in n_struct..n_cols {
            lower.push(F::zero());
            upper.push(None);
        }

        let mut a = vec![F::zero(); m * n_cols];
        let mut xb = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut is_basic = vec![false; n_cols];
        let mut may_enter = vec![true; n_cols];
        let mut sigma = Vec::with_capacity(m);
        let mut original = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);

        let mut slack = n_struct;
        for (i, row) in model.rows.iter().enumerate() {
            let mut entries: Vec<(usize, F)> = Vec::with_capacity(row.coeffs.len() + 2);
            for &(j, c) in &row.coeffs {
                if let Some(e) = entries.iter_mut().find(|e| e.0 == j) {
                    e.1 = e.1.clone() + F::from_f64(c);
                } else {
                    entries.push((j, F::from_f64(c)));
                }
            }
            let b = F::from_f64(row.rhs);
            let mut residual = b.clone();
            for (j, c) in &entries {
                residual = residual - c.clone() * lower[*j].clone();
            }
            let slack_col = match row.relation {
                Relation::Eq => None,
                Relation::Le => Some((slack, F::one())),
                Relation::Ge => Some((slack, -F::one())),
            };
            if let Some(s) = &slack_col {
                entries.push(s.clone());
                slack += 1;
            }
            let art = art_start + i;
            let slack_basic = match &slack_col {
                Some((_, c)) => !(c.clone() * residual.clone()).is_negative(),
                None => false,
            };
            let (basic_col, s) = if slack_basic {
                let (col, c) = slack_col.clone().unwrap();
                // artificial never used for this row
                upper[art] = Some(F::zero());
                may_enter[art] = false;
                (col, c)
            } else {
                let s = if residual.is_negative() { -F::one() } else { F::one() };
                (art, s)
            };
            entries.push((art, s.clone()));
            for (j, c) in &entries {
                a[i * n_cols + j] = s.clone() * c.clone();
            }
            xb.push(s.clone() * residual);
            basis.push(basic_col);
            is_basic[basic_col] = true;
            sigma.push(s);
            original.push(entries);
            rhs.push(b);
        }

        let tols = Tols {
            pivot: F::tol(cfg.pivot_tol),
            optimality: F::tol(cfg.optimality_tol),
            feasibility: F::tol(cfg.feasibility_tol),
            tie: F::tol(1e-12),
        };
        Tableau {
            m,
            n_struct,
            n_cols,
            art_start,
            a,
            xb,
            basis,
            is_basic,
            lower,
            upper,
            at_upper: vec![false; n_cols],
            may_enter,
            cost: vec![F::zero(); n_cols],
            reduced: vec![F::zero(); n_cols],
            sigma,
            original,
            rhs,
            tols,
        }
    }

    fn has_active_artificials(&self) -> bool {
        self.basis.iter().any(|&b| b >= self.art_start)
    }

    fn nonbasic_value(&self, j: usize) -> F {
        if self.at_upper[j] {
            self.upper[j].clone().expect("at upper bound without an upper bound")
        } else {
            self.lower[j].clone()
        }
    }

    fn set_phase_one_costs(&mut self) {
        for j in 0..self.n_cols {
            self.cost[j] = if j >= self.art_start && self.may_enter[j] {
                F::one()
            } else {
                F::zero()
            };
        }
        self.recompute_reduced_costs();
    }

    fn set_phase_two_costs(&mut self, model: &LpModel) {
        for j in 0..self.n_cols {
            self.cost[j] = if j < self.n_struct {
                F::from_f64(model.objective[j])
            } else {
                F::zero()
            };
        }
        self.recompute_reduced_costs();
    }

    fn recompute_reduced_costs(&mut self) {
        let n = self.n_cols;
        let mut d = self.cost.clone();
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                let aij = &self.a[i * n + j];
                if !aij.is_zero() {
                    *dj = dj.clone() - cb.clone() * aij.clone();
                }
            }
        }
        self.reduced = d;
    }

    fn infeasibility(&self) -> F {
        let mut total = F::zero();
        for i in 0..self.m {
            if self.basis[i] >= self.art_start {
                total = total + self.xb[i].abs();
            }
        }
        total
    }

    fn retire_artificials(&mut self) {
        for j in self.art_start..self.n_cols {
            self.upper[j] = Some(F::zero());
            self.may_enter[j] = false;
            self.at_upper[j] = false;
        }
    }

    fn run(&mut self, cfg: &LpConfig) -> Result<LpStatus, LpError> {
        let mut pivots = 0usize;
        loop {
            let bland = pivots >= cfg.dantzig_pivots;
            match self.iterate(bland) {
                Step::Optimal => return Ok(LpStatus::Optimal),
                Step::Unbounded => return Ok(LpStatus::Unbounded),
                Step::Moved => {}
            }
            pivots += 1;
            if pivots > cfg.max_pivots {
                return Err(LpError::NumericalFailure {
                    pivots,
                    reason: "pivot budget exhausted".into(),
                });
            }
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool, F)> = None;
        for j in 0..self.n_cols {
            if self.is_basic[j] || !self.may_enter[j] {
                continue;
            }
            if let Some(u) = &self.upper[j] {
                if *u == self.lower[j] {
                    continue;
                }
            }
            let d = &self.reduced[j];
            let increase = if !self.at_upper[j] && *d < -self.tols.optimality.clone() {
                true
            } else if self.at_upper[j] && *d > self.tols.optimality {
                false
            } else {
                continue;
            };
            if bland {
                return Some((j, increase));
            }
            let score = d.abs();
            if best.as_ref().is_none_or(|b| score > b.2) {
                best = Some((j, increase, score));
            }
        }
        best.map(|(j, inc, _)| (j, inc))
    }

    fn iterate(&mut self, bland: bool) -> Step {
        let Some((j, increase)) = self.choose_entering(bland) else {
            return Step::Optimal;
        };
        let n = self.n_cols;
        let dir = if increase { F::one() } else { -F::one() };

        // (theta, leaving row, |g|)
        let mut best: Option<(F, Option<usize>, F)> = self.upper[j]
            .as_ref()
            .map(|u| (u.clone() - self.lower[j].clone(), None, F::zero()));
        for i in 0..self.m {
            let g = dir.clone() * self.a[i * n + j].clone();
            let bi = self.basis[i];
            let limit = if g > self.tols.pivot {
                (self.xb[i].clone() - self.lower[bi].clone()) / g.clone()
            } else if g < -self.tols.pivot.clone() {
                match &self.upper[bi] {
                    Some(u) => (u.clone() - self.xb[i].clone()) / (-g.clone()),
                    None => continue,
                }
            } else {
                continue;
            };
            let limit = if limit.is_negative() { F::zero() } else { limit };
            let replace = match &best {
                None => true,
                Some((theta, row, gmag)) => {
                    if limit < theta.clone() - self.tols.tie.clone() {
                        true
                    } else if limit <= theta.clone() + self.tols.tie.clone() {
                        match row {
                            // bound flips win ties
                            None => false,
                            Some(r) => {
                                if bland {
                                    bi < self.basis[*r]
                                } else {
                                    g.abs() > *gmag
                                }
                            }
                        }
                    } else {
                        false
                    }
                }
            };
            if replace {
                best = Some((limit, Some(i), g.abs()));
            }
        }
        let Some((theta, leaving, _)) = best else {
            return Step::Unbounded;
        };

        let entering_value = self.nonbasic_value(j) + dir.clone() * theta.clone();
        if !theta.is_zero() {
            for i in 0..self.m {
                let aij = &self.a[i * n + j];
                if !aij.is_zero() {
                    let delta = theta.clone() * dir.clone() * aij.clone();
                    self.xb[i] = self.xb[i].clone() - delta;
                }
            }
        }

        let Some(r) = leaving else {
            self.at_upper[j] = !self.at_upper[j];
            return Step::Moved;
        };

        let leaving_col = self.basis[r];
        let g_r = dir * self.a[r * n + j].clone();
        self.at_upper[leaving_col] = g_r.is_negative();
        self.pivot(r, j);
        self.xb[r] = entering_value;
        self.is_basic[leaving_col] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        Step::Moved
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let n = self.n_cols;
        let p = self.a[r * n + j].clone();
        let row_r: Vec<F> = self.a[r * n..(r + 1) * n]
            .iter()
            .map(|v| v.clone() / p.clone())
            .collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * n + j].clone();
            if f.is_zero() {
                continue;
            }
            let row_i = &mut self.a[i * n..(i + 1) * n];
            for (k, rk) in row_r.iter().enumerate() {
                if !rk.is_zero() {
                    row_i[k] = row_i[k].clone() - f.clone() * rk.clone();
                }
            }
            row_i[j] = F::zero();
        }
        let f = self.reduced[j].clone();
        if !f.is_zero() {
            for (k, rk) in row_r.iter().enumerate() {
                if !rk.is_zero() {
                    self.reduced[k] = self.reduced[k].clone() - f.clone() * rk.clone();
                }
            }
            self.reduced[j] = F::zero();
        }
        self.a[r * n..(r + 1) * n].clone_from_slice(&row_r);
    }

    /// Recomputes `x_B = B^-1 (b - N x_N)` from the original rows. The
    /// artificial columns of the tableau hold `B^-1` up to the row signs.
    fn refresh_basic_values(&mut self) {
        let n = self.n_cols;
        let mut residual: Vec<F> = Vec::with_capacity(self.m);
        for k in 0..self.m {
            let mut r = self.rhs[k].clone();
            for (j, c) in &self.original[k] {
                if !self.is_basic[*j] {
                    r = r - c.clone() * self.nonbasic_value(*j);
                }
            }
            residual.push(r);
        }
        for row in 0..self.m {
            let mut v = F::zero();
            for (k, res) in residual.iter().enumerate() {
                let binv = self.sigma[k].clone() * self.a[row * n + self.art_start + k].clone();
                if !binv.is_zero() {
                    v = v + binv * res.clone();
                }
            }
            self.xb[row] = v;
        }
    }

    fn extract(&self) -> RawSolution {
        let mut values = Vec::with_capacity(self.n_struct);
        let mut row_of = vec![usize::MAX; self.n_cols];
        for (i, &b) in self.basis.iter().enumerate() {
            row_of[b] = i;
        }
        for (j, &r) in row_of.iter().enumerate().take(self.n_struct) {
            let v = if self.is_basic[j] {
                self.xb[r].clone()
            } else {
                self.nonbasic_value(j)
            };
            values.push(v.to_f64());
        }
        let mut basis: Vec<usize> = self
            .basis
            .iter()
            .copied()
            .filter(|&b| b < self.n_struct)
            .collect();
        basis.sort_unstable();
        RawSolution {
            status: LpStatus::Optimal,
            values,
            basis,
        }
    }
}
