//! Seeded random instances.
//!
//! Ranges: cut, cover and set weights are integers in 1..=10 and transition
//! weights integers in 0..=5. Metric problems place points uniformly in
//! [0, 100]^2 and move each point by up to 20 x volatility per coordinate at
//! every step; penalties are uniform in [0, 80] and transition weights uniform
//! in [0, 50]. Vertex 0 is the root or depot.

use super::{Instance, InstanceFile, Metadata, Problem};
use crate::graph::CostMatrix;
use crate::mincut::{CutStep, MsCutInstance};
use crate::pcst::{MsPcstInstance, PcstStep};
use crate::pctsp::{MsPctspInstance, PctspStep};
use crate::set_cover::{MsScInstance, ScStep};
use crate::vertex_cover::{MsVcInstance, VcStep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub problem: Problem,
    /// Vertices, or sets (and elements) for set cover.
    pub n: usize,
    pub horizon: usize,
    pub volatility: f64,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Integer weight moved by up to `5 x volatility`, kept within `lo..=hi`.
fn drift(rng: &mut ChaCha8Rng, base: i64, volatility: f64, lo: i64, hi: i64) -> f64 {
    let span = (5.0 * volatility).round() as i64;
    let d = if span > 0 { rng.gen_range(-span..=span) } else { 0 };
    (base + d).clamp(lo, hi) as f64
}

fn int_transitions(rng: &mut ChaCha8Rng, horizon: usize, n: usize) -> Vec<Vec<f64>> {
    (1..horizon)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=5) as f64).collect())
        .collect()
}

fn mincut(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> MsCutInstance {
    let n = p.n.max(2);
    let mut base: Vec<(usize, usize, i64)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.6) {
                base.push((u, v, rng.gen_range(1..=10)));
            }
        }
    }
    let steps = (0..p.horizon)
        .map(|_| CutStep {
            edges: base
                .iter()
                .map(|&(u, v, w)| (u, v, drift(rng, w, p.volatility, 0, 15)))
                .collect(),
        })
        .collect();
    MsCutInstance {
        vertices: n,
        source: 0,
        sink: n - 1,
        steps,
        transition: int_transitions(rng, p.horizon, n),
    }
}

fn vertexcover(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> MsVcInstance {
    let n = p.n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut present: Vec<bool> = pairs.iter().map(|_| rng.gen_bool(0.5)).collect();
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    let mut steps = Vec::with_capacity(p.horizon);
    for t in 0..p.horizon {
        if t > 0 {
            for e in present.iter_mut() {
                if rng.gen_bool((p.volatility * 0.5).clamp(0.0, 1.0)) {
                    *e = !*e;
                }
            }
        }
        steps.push(VcStep {
            edges: pairs.iter().zip(&present).filter(|(_, &b)| b).map(|(&e, _)| e).collect(),
            weights: weights.iter().map(|&w| drift(rng, w, p.volatility, 1, 15)).collect(),
        });
    }
    MsVcInstance {
        vertices: n,
        steps,
        transition: int_transitions(rng, p.horizon, n),
    }
}

fn setcover(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> MsScInstance {
    let (m, elements) = (p.n, p.n);
    let mut member: Vec<Vec<bool>> = (0..m)
        .map(|_| (0..elements).map(|_| rng.gen_bool(0.4)).collect())
        .collect();
    let weights: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=10)).collect();
    let mut steps = Vec::with_capacity(p.horizon);
    for t in 0..p.horizon {
        if t > 0 {
            for row in member.iter_mut() {
                for b in row.iter_mut() {
                    if rng.gen_bool((p.volatility * 0.5).clamp(0.0, 1.0)) {
                        *b = !*b;
                    }
                }
            }
        }
        // every element belongs to some set
        for e in 0..elements {
            if !(0..m).any(|i| member[i][e]) {
                let i = rng.gen_range(0..m);
                member[i][e] = true;
            }
        }
        let ground = (0..elements).filter(|_| rng.gen_bool(0.8)).collect();
        steps.push(ScStep {
            ground,
            members: member
                .iter()
                .map(|row| (0..elements).filter(|&e| row[e]).collect())
                .collect(),
            weights: weights.iter().map(|&w| drift(rng, w, p.volatility, 1, 15)).collect(),
        });
    }
    MsScInstance {
        elements,
        sets: m,
        steps,
        penalties: (0..m).map(|_| rng.gen_range(0..=5) as f64).collect(),
    }
}

/// Per-step point sets, each a jittered copy of one base layout.
fn moving_points(rng: &mut ChaCha8Rng, n: usize, horizon: usize, volatility: f64) -> Vec<Vec<(f64, f64)>> {
    let base: Vec<(f64, f64)> = (0..n)
        .map(|_| (round2(rng.gen_range(0.0..100.0)), round2(rng.gen_range(0.0..100.0))))
        .collect();
    let r = 20.0 * volatility;
    (0..horizon)
        .map(|_| {
            base.iter()
                .map(|&(x, y)| {
                    if r > 0.0 {
                        (round2(x + rng.gen_range(-r..=r)), round2(y + rng.gen_range(-r..=r)))
                    } else {
                        (x, y)
                    }
                })
                .collect()
        })
        .collect()
}

fn prizes(rng: &mut ChaCha8Rng, n: usize, horizon: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let penalties = (0..horizon)
        .map(|_| {
            (0..n)
                .map(|v| if v == 0 { 0.0 } else { round2(rng.gen_range(0.0..=80.0)) })
                .collect()
        })
        .collect();
    let transition = (0..n)
        .map(|v| if v == 0 { 0.0 } else { round2(rng.gen_range(0.0..=50.0)) })
        .collect();
    (penalties, transition)
}

fn pcst(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> MsPcstInstance {
    let points = moving_points(rng, p.n, p.horizon, p.volatility);
    let (penalties, transition) = prizes(rng, p.n, p.horizon);
    MsPcstInstance {
        vertices: p.n,
        root: 0,
        steps: points
            .iter()
            .zip(penalties)
            .map(|(pts, pen)| PcstStep {
                costs: CostMatrix::from_points(pts)
                    .rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(Some).collect())
                    .collect(),
                penalties: pen,
            })
            .collect(),
        transition,
    }
}

fn pctsp(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> MsPctspInstance {
    let points = moving_points(rng, p.n, p.horizon, p.volatility);
    let (penalties, transition) = prizes(rng, p.n, p.horizon);
    MsPctspInstance {
        vertices: p.n,
        depot: 0,
        steps: points
            .iter()
            .zip(penalties)
            .map(|(pts, pen)| PctspStep {
                costs: CostMatrix::from_points(pts).rows(),
                penalties: pen,
            })
            .collect(),
        transition,
    }
}

/// Deterministic in `seed`. `n` is clamped to at least 2 and `horizon` to at
/// least 1.
pub fn generate_instance(
    problem: Problem,
    n: usize,
    horizon: usize,
    seed: u64,
    volatility: f64,
) -> InstanceFile {
    let params = GeneratorParams {
        problem,
        n: n.max(2),
        horizon: horizon.max(1),
        volatility: volatility.max(0.0),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instance = match problem {
        Problem::Mincut => Instance::Mincut(mincut(&mut rng, &params)),
        Problem::Vertexcover => Instance::Vertexcover(vertexcover(&mut rng, &params)),
        Problem::Setcover => Instance::Setcover(setcover(&mut rng, &params)),
        Problem::Pcst => Instance::Pcst(pcst(&mut rng, &params)),
        Problem::Pctsp => Instance::Pctsp(pctsp(&mut rng, &params)),
    };
    InstanceFile {
        id: format!("{problem}-n{}-t{}-s{seed}", params.n, params.horizon),
        metadata: Metadata {
            seed: Some(seed),
            generator: Some(params),
            extra: BTreeMap::new(),
        },
        instance,
    }
}

/// The shipped corpus: ten instances per problem with 4 or 5 vertices (sets),
/// 2 or 3 steps and volatility cycling through 0, 0.25 and 0.5.
pub fn generate_corpus() -> Vec<InstanceFile> {
    let mut out = Vec::new();
    for (pi, problem) in Problem::ALL.into_iter().enumerate() {
        for k in 0..10u64 {
            let seed = 1000 * (pi as u64 + 1) + k;
            let n = 4 + (k % 2) as usize;
            let horizon = 2 + (k / 2 % 2) as usize;
            let volatility = [0.0, 0.25, 0.5][(k % 3) as usize];
            let mut f = generate_instance(problem, n, horizon, seed, volatility);
            f.id = format!("{problem}-{k:02}");
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_instance;
    use super::*;
    use crate::graph::check_metric;

    #[test]
    fn same_seed_same_file() {
        for p in Problem::ALL {
            let a = generate_instance(p, 5, 3, 7, 0.3).to_json();
            let b = generate_instance(p, 5, 3, 7, 0.3).to_json();
            assert_eq!(a, b);
            assert_ne!(a, generate_instance(p, 5, 3, 8, 0.3).to_json());
        }
    }

    #[test]
    fn zero_volatility_repeats_steps() {
        let f = generate_instance(Problem::Pctsp, 5, 3, 1, 0.0);
        let Instance::Pctsp(i) = f.instance else { unreachable!() };
        assert_eq!(i.steps[0].costs, i.steps[2].costs);
        let f = generate_instance(Problem::Mincut, 5, 3, 1, 0.0);
        let Instance::Mincut(i) = f.instance else { unreachable!() };
        assert_eq!(i.steps[0], i.steps[1]);
        let f = generate_instance(Problem::Vertexcover, 5, 3, 1, 0.0);
        let Instance::Vertexcover(i) = f.instance else { unreachable!() };
        assert_eq!(i.steps[0], i.steps[2]);
    }

    #[test]
    fn generated_files_parse_back_identically() {
        for seed in 0..10 {
            for p in Problem::ALL {
                let f = generate_instance(p, 2 + seed as usize % 5, 1 + seed as usize % 4, seed, 0.4);
                assert_eq!(parse_instance(&f.to_json()).unwrap(), f);
            }
        }
    }

    #[test]
    fn metric_steps_are_metric() {
        for seed in 0..20 {
            let f = generate_instance(Problem::Pctsp, 6, 3, seed, 1.0);
            let Instance::Pctsp(i) = f.instance else { unreachable!() };
            for t in 0..3 {
                assert_eq!(check_metric(&i.step_costs(t)), None);
            }
        }
    }

    #[test]
    fn corpus_shape() {
        let c = generate_corpus();
        assert_eq!(c.len(), 50);
        let mut ids: Vec<&str> = c.iter().map(|f| f.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 50);
    }
}
