//! The connectivity LPs with every cut row written out, for checking the
//! cutting-plane solutions on small instances.

use crate::error::OracleError;
use crate::lp::{solve_lp_with, LpConfig};
use crate::pcst::{lp as pcst_lp, MsPcstInstance};
use crate::pctsp::{lp as pctsp_lp, MsPctspInstance};
use crate::{Error, Result};

const MAX_FULL_LP_VERTICES: usize = 7;

/// Every vertex set holding `v` and avoiding each vertex in `excluded`,
/// over `n` vertices.
fn sets_with(n: usize, v: usize, excluded: &[usize]) -> Vec<Vec<bool>> {
    let free: Vec<usize> = (0..n).filter(|&u| u != v && !excluded.contains(&u)).collect();
    (0u32..1 << free.len())
        .map(|mask| {
            let mut side = vec![false; n];
            side[v] = true;
            for (i, &u) in free.iter().enumerate() {
                side[u] = mask >> i & 1 == 1;
            }
            side
        })
        .collect()
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_FULL_LP_VERTICES {
        return Err(OracleError::InstanceTooLarge {
            what: "vertices",
            size: n,
            limit: MAX_FULL_LP_VERTICES,
        }
        .into());
    }
    Ok(())
}

pub fn pcst_full_lp_value(inst: &MsPcstInstance, cfg: &LpConfig) -> Result<f64> {
    inst.validate()?;
    check_size(inst.vertices)?;
    let (mut model, lay) = pcst_lp::base_model(inst);
    for t in 0..lay.horizon {
        for v in lay.non_root() {
            for side in sets_with(lay.n, v, &[lay.root]) {
                model.add_row(pcst_lp::cut_row(&lay, t, v, &side));
            }
        }
    }
    let sol = solve_lp_with(&model, cfg)?;
    if !sol.is_optimal() {
        return Err(Error::LpNotOptimal("infeasible or unbounded"));
    }
    let constant: f64 = (0..lay.horizon)
        .flat_map(|t| lay.non_root().map(move |v| inst.steps[t].penalties[v]))
        .sum();
    Ok(sol.objective_value + constant)
}

pub fn pctsp_full_lp_value(inst: &MsPctspInstance, cfg: &LpConfig) -> Result<f64> {
    inst.validate()?;
    check_size(inst.vertices)?;
    let (mut model, lay) = pctsp_lp::base_model(inst);
    for t in 0..lay.horizon {
        for v in 0..lay.n {
            for side in sets_with(lay.n + 1, v, &[lay.dummy()]) {
                model.add_row(pctsp_lp::cut_row(&lay, t, v, &side));
            }
        }
    }
    let sol = solve_lp_with(&model, cfg)?;
    if !sol.is_optimal() {
        return Err(Error::LpNotOptimal("infeasible or unbounded"));
    }
    let constant: f64 = (0..lay.horizon)
        .flat_map(|t| lay.non_depot().map(move |v| inst.steps[t].penalties[v]))
        .sum();
    Ok(sol.objective_value + constant)
}
