use super::report::{brute_force_schedule, ratio, solve_report, SolveOptions};
use super::{InstanceFile, Problem};
use crate::graph::MatchingMode;
use crate::lp::LpConfig;
use crate::schedule::Mode;
use crate::Result;
use rayon::prelude::*;
use serde::Serialize;

/// Slack allowed when checking a ratio against its bound.
pub const BOUND_SLACK: f64 = 1e-6;

/// Column order of the benchmark CSV.
pub const BENCH_COLUMNS: [&str; 24] = [
    "instance",
    "problem",
    "algorithm",
    "mode",
    "matching",
    "n",
    "horizon",
    "alpha",
    "beta",
    "gamma",
    "lp_value",
    "cost",
    "step_cost",
    "penalty_cost",
    "transition_cost",
    "oracle_cost",
    "ratio_vs_lp",
    "ratio_vs_oracle",
    "bound",
    "within_bound",
    "cut_rounds",
    "cuts_added",
    "flags",
    "wall_time_ms",
];

/// Columns that differ between otherwise identical runs.
pub const TIMING_COLUMNS: [&str; 1] = ["wall_time_ms"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub problem: Problem,
    pub algorithm: String,
    pub mode: Option<Mode>,
    pub matching: Option<MatchingMode>,
    pub n: usize,
    pub horizon: usize,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub lp_value: Option<f64>,
    pub cost: f64,
    pub step_cost: f64,
    pub penalty_cost: f64,
    pub transition_cost: f64,
    pub oracle_cost: Option<f64>,
    pub ratio_vs_lp: Option<f64>,
    pub ratio_vs_oracle: Option<f64>,
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub cut_rounds: Option<usize>,
    pub cuts_added: Option<usize>,
    /// `;`-separated.
    pub flags: String,
    pub wall_time_ms: f64,
}

fn modes(p: Problem) -> &'static [Mode] {
    match p {
        Problem::Pcst | Problem::Pctsp => &[Mode::Fixed, Mode::Derandomized],
        _ => &[Mode::Fixed],
    }
}

fn rows_for(file: &InstanceFile, matching: MatchingMode, lp: &LpConfig) -> Result<Vec<BenchRow>> {
    let oracle = brute_force_schedule(&file.instance)?.total_cost() + 0.0;
    let mut rows = Vec::new();
    for &mode in modes(file.instance.problem()) {
        let opts = SolveOptions {
            mode,
            matching,
            with_oracle: false,
            lp: *lp,
        };
        let r = solve_report(file, &opts)?;
        let ratio_vs_oracle = ratio(r.cost, oracle);
        let within_bound = r.bound.map(|b| {
            let lp_ok = match r.lp_value {
                Some(_) => r.ratio_vs_lp.is_some_and(|q| q <= b + BOUND_SLACK),
                None => true,
            };
            lp_ok && ratio_vs_oracle.is_some_and(|q| q <= b + BOUND_SLACK)
        });
        rows.push(BenchRow {
            instance: r.id,
            problem: r.problem,
            algorithm: r.algorithm,
            mode: r.mode,
            matching: r.matching,
            n: file.instance.size(),
            horizon: file.instance.horizon(),
            alpha: r.alpha,
            beta: r.beta,
            gamma: r.gamma,
            lp_value: r.lp_value,
            cost: r.cost,
            step_cost: r.breakdown.step,
            penalty_cost: r.breakdown.penalty,
            transition_cost: r.breakdown.transition,
            oracle_cost: Some(oracle),
            ratio_vs_lp: r.ratio_vs_lp,
            ratio_vs_oracle,
            bound: r.bound,
            within_bound,
            cut_rounds: r.cut_rounds,
            cuts_added: r.cuts_added,
            flags: r.flags.join(";"),
            wall_time_ms: r.wall_time_ms,
        });
    }
    Ok(rows)
}

/// Solves every file (in parallel) and returns rows in input order: one per
/// (instance, algorithm, mode).
pub fn bench_corpus(files: &[InstanceFile], matching: MatchingMode, lp: &LpConfig) -> Result<Vec<BenchRow>> {
    let per_file: Vec<Result<Vec<BenchRow>>> = files.par_iter().map(|f| rows_for(f, matching, lp)).collect();
    let mut out = Vec::new();
    for r in per_file {
        out.extend(r?);
    }
    Ok(out)
}

/// CSV text with a header row; timing columns are left out when
/// `with_timing` is false.
pub fn rows_to_csv(rows: &[BenchRow], with_timing: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let keep: Vec<usize> = (0..BENCH_COLUMNS.len())
        .filter(|&i| with_timing || !TIMING_COLUMNS.contains(&BENCH_COLUMNS[i]))
        .collect();
    w.write_record(keep.iter().map(|&i| BENCH_COLUMNS[i])).expect("in-memory write");
    for row in rows {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        inner.serialize(row).expect("rows serialize");
        let bytes = inner.into_inner().expect("in-memory write");
        let rec = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(bytes.as_slice())
            .records()
            .next()
            .expect("one record")
            .expect("valid csv");
        w.write_record(keep.iter().map(|&i| &rec[i])).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::super::generate_instance;
    use super::*;

    #[test]
    fn header_matches_row_fields() {
        let f = generate_instance(Problem::Pcst, 4, 2, 1, 0.2);
        let rows = bench_corpus(std::slice::from_ref(&f), MatchingMode::Blossom, &LpConfig::default()).unwrap();
        assert_eq!(rows.len(), 2);
        let csv = rows_to_csv(&rows, true);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), BENCH_COLUMNS.join(","));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), BENCH_COLUMNS.len());
        assert_eq!(first[0], f.id);
        assert_eq!(first[3], "fixed");
        assert_eq!(first[19], "true");
        let untimed = rows_to_csv(&rows, false);
        assert!(!untimed.contains("wall_time_ms"));
    }
}
