//! LP relaxation of the multistage prize-collecting Steiner tree problem,
//! with the connectivity cuts added lazily by min-cut separation.

use super::MsPcstInstance;
use crate::graph::{min_st_cut, Graph};
use crate::lp::{solve_with_separation, LpConfig, LpModel, Row, SeparationOracle, ViolatedRow};
use crate::schedule::{CostBreakdown, FractionalSolution};
use crate::{Error, Result};

pub const MAX_CUT_ROUNDS: usize = 500;

/// Variable indices. Per step there is one `x` per vertex pair, then one `s`
/// and (between steps) one `z` per non-root vertex. The root has no `s`.
#[derive(Debug, Clone)]
pub struct Layout {
    pub n: usize,
    pub horizon: usize,
    pub root: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(n: usize, horizon: usize, root: usize) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Layout {
            n,
            horizon,
            root,
            pairs,
        }
    }

    fn slot(&self, v: usize) -> usize {
        debug_assert!(v != self.root);
        if v < self.root {
            v
        } else {
            v - 1
        }
    }

    pub fn x(&self, t: usize, k: usize) -> usize {
        t * self.pairs.len() + k
    }

    pub fn s(&self, t: usize, v: usize) -> usize {
        self.horizon * self.pairs.len() + t * (self.n - 1) + self.slot(v)
    }

    pub fn z(&self, t: usize, v: usize) -> usize {
        self.horizon * (self.pairs.len() + self.n - 1) + t * (self.n - 1) + self.slot(v)
    }

    pub fn non_root(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| v != self.root)
    }
}

/// Base model: objective, transition rows and the singleton cuts. The
/// objective omits the constant `sum of all penalties`.
pub fn base_model(inst: &MsPcstInstance) -> (LpModel, Layout) {
    let lay = Layout::new(inst.vertices, inst.horizon(), inst.root);
    let mut m = LpModel::new();
    for t in 0..lay.horizon {
        let c = inst.step_costs(t);
        for &(u, v) in &lay.pairs {
            m.add_var(c.get(u, v));
        }
    }
    for t in 0..lay.horizon {
        for v in lay.non_root() {
            m.add_var(-inst.steps[t].penalties[v]);
        }
    }
    for _ in 1..lay.horizon {
        for v in lay.non_root() {
            m.add_var(inst.transition[v]);
        }
    }
    for t in 0..lay.horizon {
        for v in lay.non_root() {
            let mut coeffs: Vec<(usize, f64)> = lay
                .pairs
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(k, _)| (lay.x(t, k), 1.0))
                .collect();
            coeffs.push((lay.s(t, v), -1.0));
            m.add_row(Row::ge(coeffs, 0.0));
        }
    }
    for t in 0..lay.horizon.saturating_sub(1) {
        for v in lay.non_root() {
            let (z, a, b) = (lay.z(t, v), lay.s(t, v), lay.s(t + 1, v));
            m.add_row(Row::ge(vec![(z, 1.0), (a, -1.0), (b, 1.0)], 0.0));
            m.add_row(Row::ge(vec![(z, 1.0), (a, 1.0), (b, -1.0)], 0.0));
        }
    }
    (m, lay)
}

/// Row `sum_{e in delta(S)} x_e - s_v >= 0` for the vertex set `side` (which
/// holds `v` and not the root).
pub fn cut_row(lay: &Layout, t: usize, v: usize, side: &[bool]) -> Row {
    let mut coeffs: Vec<(usize, f64)> = lay
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| side[a] != side[b])
        .map(|(k, _)| (lay.x(t, k), 1.0))
        .collect();
    coeffs.push((lay.s(t, v), -1.0));
    Row::ge(coeffs, 0.0)
}

pub struct CutSeparator<'a> {
    pub lay: &'a Layout,
}

impl SeparationOracle for CutSeparator<'_> {
    fn separate(&self, values: &[f64], tol: f64) -> Vec<ViolatedRow> {
        let lay = self.lay;
        let mut out = Vec::new();
        for t in 0..lay.horizon {
            let mut g = Graph::new(lay.n);
            for (k, &(u, v)) in lay.pairs.iter().enumerate() {
                let cap = values[lay.x(t, k)].max(0.0);
                if cap > 0.0 {
                    g.add_edge(u, v, cap).expect("pairs are valid edges");
                }
            }
            for v in lay.non_root() {
                let s = values[lay.s(t, v)];
                if s <= tol {
                    continue;
                }
                let cut = min_st_cut(&g, v, lay.root).expect("distinct vertices");
                if cut.value < s - tol {
                    out.push(ViolatedRow {
                        row: cut_row(lay, t, v, &cut.side_mask(lay.n)),
                        violation: s - cut.value,
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn extract(
    inst: &MsPcstInstance,
    lay: &Layout,
    values: &[f64],
    objective: f64,
) -> FractionalSolution {
    let mut parts = CostBreakdown::default();
    let mut s = Vec::with_capacity(lay.horizon);
    let mut x = Vec::with_capacity(lay.horizon);
    for t in 0..lay.horizon {
        let c = inst.step_costs(t);
        let mut row = vec![1.0; lay.n];
        for v in lay.non_root() {
            row[v] = values[lay.s(t, v)];
            parts.penalty += inst.steps[t].penalties[v] * (1.0 - row[v]);
        }
        s.push(row);
        let mut edges = Vec::new();
        for (k, &(u, v)) in lay.pairs.iter().enumerate() {
            let val = values[lay.x(t, k)];
            parts.step += c.get(u, v) * val;
            if val.abs() > 1e-12 {
                edges.push((u, v, val));
            }
        }
        x.push(edges);
    }
    let mut z = Vec::new();
    for t in 0..lay.horizon.saturating_sub(1) {
        let mut row = vec![0.0; lay.n];
        for v in lay.non_root() {
            row[v] = values[lay.z(t, v)];
            parts.transition += inst.transition[v] * row[v];
        }
        z.push(row);
    }
    let constant: f64 = (0..lay.horizon)
        .flat_map(|t| lay.non_root().map(move |v| (t, v)))
        .map(|(t, v)| inst.steps[t].penalties[v])
        .sum();
    FractionalSolution {
        s,
        x,
        z,
        lp_value: objective + constant,
        parts,
        cut_rounds: 0,
        cuts_added: 0,
        exact_fallback: false,
    }
}

pub fn pcst_lp_solve(inst: &MsPcstInstance, cfg: &LpConfig) -> Result<FractionalSolution> {
    let (base, lay) = base_model(inst);
    let sep = solve_with_separation(&base, &CutSeparator { lay: &lay }, MAX_CUT_ROUNDS, cfg)?;
    if !sep.solution.is_optimal() {
        return Err(Error::LpNotOptimal("infeasible or unbounded"));
    }
    let mut frac = extract(inst, &lay, &sep.solution.values, sep.solution.objective_value);
    frac.cut_rounds = sep.rounds;
    frac.cuts_added = sep.cuts_added;
    frac.exact_fallback = sep.solution.exact_fallback;
    Ok(frac)
}
