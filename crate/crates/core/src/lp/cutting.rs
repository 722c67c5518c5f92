use super::{solve_lp_with, LpConfig, LpModel, LpSolution, Row};
use crate::error::LpError;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, PartialEq)]
pub struct ViolatedRow {
    pub row: Row,
    pub violation: f64,
}

/// Separation for a constraint family too large to list explicitly.
///
/// `separate` returns rows of the family violated by `values` by more than
/// `tol`; an empty answer certifies that the whole family holds.
pub trait SeparationOracle {
    fn separate(&self, values: &[f64], tol: f64) -> Vec<ViolatedRow>;
}

impl<F> SeparationOracle for F
where
    F: Fn(&[f64], f64) -> Vec<ViolatedRow>,
{
    fn separate(&self, values: &[f64], tol: f64) -> Vec<ViolatedRow> {
        self(values, tol)
    }
}

#[derive(Debug, Clone)]
pub struct SeparatedSolution {
    pub solution: LpSolution,
    /// Number of LP solves performed.
    pub rounds: usize,
    pub cuts_added: usize,
    /// Objective of every round, in order.
    pub round_objectives: Vec<f64>,
    /// The base model plus every cut that was added.
    pub model: LpModel,
}

fn fingerprint(row: &Row) -> u64 {
    let mut coeffs: Vec<(usize, u64)> = row
        .coeffs
        .iter()
        .map(|&(j, a)| (j, (a + 0.0).to_bits()))
        .collect();
    coeffs.sort_unstable();
    let mut h = DefaultHasher::new();
    coeffs.hash(&mut h);
    row.relation.hash(&mut h);
    (row.rhs + 0.0).to_bits().hash(&mut h);
    h.finish()
}

/// Cutting-plane loop: solve, ask the oracle for violated rows, add them,
/// repeat until the oracle reports nothing.
///
/// Rows whose fingerprint is already in the model are never re-added.
pub fn solve_with_separation(
    base: &LpModel,
    oracle: &dyn SeparationOracle,
    max_rounds: usize,
    cfg: &LpConfig,
) -> Result<SeparatedSolution, LpError> {
    let mut model = base.clone();
    let mut seen: HashSet<u64> = model.rows.iter().map(fingerprint).collect();
    let mut round_objectives = Vec::new();
    let mut cuts_added = 0;

    for round in 1..=max_rounds.max(1) {
        let solution = solve_lp_with(&model, cfg)?;
        if !solution.is_optimal() {
            return Ok(SeparatedSolution {
                solution,
                rounds: round,
                cuts_added,
                round_objectives,
                model,
            });
        }
        round_objectives.push(solution.objective_value);
        let cuts = oracle.separate(&solution.values, cfg.separation_tol);
        if cuts.is_empty() {
            return Ok(SeparatedSolution {
                solution,
                rounds: round,
                cuts_added,
                round_objectives,
                model,
            });
        }
        let mut fresh = 0;
        for cut in cuts {
            if seen.insert(fingerprint(&cut.row)) {
                model.add_row(cut.row);
                fresh += 1;
            }
        }
        if fresh == 0 {
            return Err(LpError::SeparationStalled { rounds: round });
        }
        cuts_added += fresh;
        if round == max_rounds {
            return Err(LpError::RoundLimitExceeded {
                rounds: max_rounds,
                best_bound: solution.objective_value,
            });
        }
    }
    unreachable!("loop returns on every path")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, Relation};

    #[test]
    fn empty_family_matches_plain_solve() {
        let mut m = LpModel::new();
        let x = m.add_var(1.0);
        let y = m.add_var(2.0);
        m.add_row(Row::ge(vec![(x, 1.0), (y, 1.0)], 1.0));
        let none = |_: &[f64], _: f64| Vec::new();
        let sep = solve_with_separation(&m, &none, 10, &LpConfig::default()).unwrap();
        let plain = solve_lp(&m).unwrap();
        assert_eq!(sep.solution, plain);
        assert_eq!(sep.rounds, 1);
    }

    #[test]
    fn adds_cuts_until_satisfied_and_objective_is_monotone() {
        // min sum x_i with x_i + x_j >= 1 for all pairs, handed out lazily
        let n = 5;
        let mut m = LpModel::new();
        for _ in 0..n {
            m.add_var(1.0);
        }
        let oracle = move |v: &[f64], tol: f64| {
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let viol = 1.0 - v[i] - v[j];
                    if viol > tol {
                        out.push(ViolatedRow {
                            row: Row::new(vec![(i, 1.0), (j, 1.0)], Relation::Ge, 1.0),
                            violation: viol,
                        });
                    }
                }
            }
            out
        };
        let sep = solve_with_separation(&m, &oracle, 50, &LpConfig::default()).unwrap();
        assert!((sep.solution.objective_value - 2.5).abs() < 1e-9);
        assert!(sep
            .round_objectives
            .windows(2)
            .all(|w| w[1] >= w[0] - 1e-9));
        assert!(oracle(&sep.solution.values, 1e-6).is_empty());
    }

    #[test]
    fn round_limit_and_duplicates() {
        let mut m = LpModel::new();
        m.add_var(1.0);
        let always = |_: &[f64], _: f64| {
            vec![ViolatedRow {
                row: Row::ge(vec![(0, 1.0)], 0.25),
                violation: 1.0,
            }]
        };
        let err = solve_with_separation(&m, &always, 1, &LpConfig::default()).unwrap_err();
        assert!(matches!(err, LpError::RoundLimitExceeded { rounds: 1, .. }));
        let err = solve_with_separation(&m, &always, 10, &LpConfig::default()).unwrap_err();
        assert_eq!(err, LpError::SeparationStalled { rounds: 2 });
    }
}
