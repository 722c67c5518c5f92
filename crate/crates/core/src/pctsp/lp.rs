//! LP relaxation of the multistage prize-collecting TSP over the graph with a
//! dummy depot copy `r'`, cut rows added by min-cut separation.

use super::MsPctspInstance;
use crate::graph::{min_st_cut, CostMatrix, Graph};
use crate::lp::{solve_with_separation, LpConfig, LpModel, Row, SeparationOracle, ViolatedRow};
use crate::schedule::{CostBreakdown, FractionalSolution};
use crate::{Error, Result};

pub const MAX_CUT_ROUNDS: usize = 500;

/// Step costs on `V + {r'}`: `r'` is vertex `n`, at distance 0 from the depot
/// and at the depot's distance from everyone else.
pub fn augmented_costs(costs: &CostMatrix, depot: usize) -> CostMatrix {
    let n = costs.n();
    let mut m = CostMatrix::zeros(n + 1);
    for u in 0..n {
        for v in u + 1..n {
            m.set(u, v, costs.get(u, v));
        }
        if u != depot {
            m.set(u, n, costs.get(u, depot));
        }
    }
    m
}

/// Variable indices. Per step one `x` per vertex pair of the augmented graph,
/// then one `s` per non-depot vertex of `V`, then (between steps) one `z` per
/// non-depot vertex.
#[derive(Debug, Clone)]
pub struct Layout {
    /// `|V|`; the dummy is vertex `n`.
    pub n: usize,
    pub horizon: usize,
    pub depot: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(n: usize, horizon: usize, depot: usize) -> Self {
        let pairs = (0..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        Layout {
            n,
            horizon,
            depot,
            pairs,
        }
    }

    pub fn dummy(&self) -> usize {
        self.n
    }

    fn slot(&self, v: usize) -> usize {
        debug_assert!(v != self.depot && v < self.n);
        if v < self.depot {
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

    pub fn non_depot(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| v != self.depot)
    }

    fn incident(&self, t: usize, v: usize) -> Vec<(usize, f64)> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(k, _)| (self.x(t, k), 1.0))
            .collect()
    }
}

/// Base model: objective, degree rows and transition rows. The objective
/// omits the constant `sum of all penalties`.
///
/// Every `x` lies in `[0, 1]` except the zero-cost edge `{r, r'}`, which may
/// carry 2: with nothing worth visiting the two depot copies form a 2-cycle.
pub fn base_model(inst: &MsPctspInstance) -> (LpModel, Layout) {
    let lay = Layout::new(inst.vertices, inst.horizon(), inst.depot);
    let link = (inst.depot.min(lay.dummy()), inst.depot.max(lay.dummy()));
    let mut m = LpModel::new();
    for t in 0..lay.horizon {
        let c = augmented_costs(&inst.step_costs(t), inst.depot);
        for &(u, v) in &lay.pairs {
            if (u, v) == link {
                m.add_bounded_var(0.0, 0.0, 2.0);
            } else {
                m.add_var(c.get(u, v));
            }
        }
    }
    for t in 0..lay.horizon {
        for v in lay.non_depot() {
            m.add_var(-inst.steps[t].penalties[v]);
        }
    }
    for _ in 1..lay.horizon {
        for v in lay.non_depot() {
            m.add_var(inst.transition[v]);
        }
    }
    for t in 0..lay.horizon {
        for v in 0..=lay.n {
            let mut coeffs = lay.incident(t, v);
            if v == lay.depot || v == lay.dummy() {
                m.add_row(Row::eq(coeffs, 2.0));
            } else {
                coeffs.push((lay.s(t, v), -2.0));
                m.add_row(Row::eq(coeffs, 0.0));
            }
        }
    }
    for t in 0..lay.horizon.saturating_sub(1) {
        for v in lay.non_depot() {
            let (z, a, b) = (lay.z(t, v), lay.s(t, v), lay.s(t + 1, v));
            m.add_row(Row::ge(vec![(z, 1.0), (a, -1.0), (b, 1.0)], 0.0));
            m.add_row(Row::ge(vec![(z, 1.0), (a, 1.0), (b, -1.0)], 0.0));
        }
    }
    (m, lay)
}

/// Row `sum_{e in delta(S)} x_e >= 2 s_v` for the set `side` (holding `v`,
/// not `r'`); for the depot the right-hand side is the constant 2.
pub fn cut_row(lay: &Layout, t: usize, v: usize, side: &[bool]) -> Row {
    let mut coeffs: Vec<(usize, f64)> = lay
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| side[a] != side[b])
        .map(|(k, _)| (lay.x(t, k), 1.0))
        .collect();
    if v == lay.depot {
        Row::ge(coeffs, 2.0)
    } else {
        coeffs.push((lay.s(t, v), -2.0));
        Row::ge(coeffs, 0.0)
    }
}

/// Capacity graph of one step's `x` values on the augmented vertex set.
pub fn capacity_graph(n_aug: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Graph {
    let mut g = Graph::new(n_aug);
    for (u, v, cap) in edges {
        if cap > 0.0 {
            g.add_edge(u, v, cap).expect("pairs are valid edges");
        }
    }
    g
}

pub struct CutSeparator<'a> {
    pub lay: &'a Layout,
}

impl SeparationOracle for CutSeparator<'_> {
    fn separate(&self, values: &[f64], tol: f64) -> Vec<ViolatedRow> {
        let lay = self.lay;
        let mut out = Vec::new();
        for t in 0..lay.horizon {
            let g = capacity_graph(
                lay.n + 1,
                lay.pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(u, v))| (u, v, values[lay.x(t, k)].max(0.0))),
            );
            for v in 0..lay.n {
                let need = if v == lay.depot {
                    2.0
                } else {
                    2.0 * values[lay.s(t, v)]
                };
                if need <= tol {
                    continue;
                }
                let cut = min_st_cut(&g, v, lay.dummy()).expect("distinct vertices");
                if cut.value < need - tol {
                    out.push(ViolatedRow {
                        row: cut_row(lay, t, v, &cut.side_mask(lay.n + 1)),
                        violation: need - cut.value,
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn extract(
    inst: &MsPctspInstance,
    lay: &Layout,
    values: &[f64],
    objective: f64,
) -> FractionalSolution {
    let mut parts = CostBreakdown::default();
    let mut s = Vec::with_capacity(lay.horizon);
    let mut x = Vec::with_capacity(lay.horizon);
    for t in 0..lay.horizon {
        let c = augmented_costs(&inst.step_costs(t), inst.depot);
        let mut row = vec![1.0; lay.n];
        for v in lay.non_depot() {
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
        for v in lay.non_depot() {
            row[v] = values[lay.z(t, v)];
            parts.transition += inst.transition[v] * row[v];
        }
        z.push(row);
    }
    let constant: f64 = (0..lay.horizon)
        .flat_map(|t| lay.non_depot().map(move |v| (t, v)))
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

/// Solves the relaxation. In the result, `x` is indexed on the augmented
/// vertex set (the dummy depot is vertex `|V|`) and `s` holds 1 at the depot.
pub fn pctsp_lp_solve(inst: &MsPctspInstance, cfg: &LpConfig) -> Result<FractionalSolution> {
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

/// Smallest `v`-`r'` cut under step `t`'s LP values divided by `scale`.
pub fn dummy_cut_value(frac: &FractionalSolution, n: usize, t: usize, v: usize, scale: f64) -> f64 {
    let g = capacity_graph(n + 1, frac.x[t].iter().map(|&(a, b, x)| (a, b, x / scale)));
    min_st_cut(&g, v, n).expect("distinct vertices").value
}
