use clap::{Args, Parser, Subcommand};
use msopt_core::error::OracleError;
use msopt_core::graph::MatchingMode;
use msopt_core::io::{
    bench_corpus, generate_corpus, generate_instance, oracle_report, parse_instance, rows_to_csv,
    solve_report, InstanceFile, Problem, SolveOptions,
};
use msopt_core::lp::LpConfig;
use msopt_core::schedule::Mode;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "msopt", version, about = "Multistage optimization solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write a JSON report.
    Solve(SolveArgs),
    /// Solve a small instance exactly by enumeration.
    Oracle(SolveArgs),
    /// Generate a random instance, or the whole benchmark corpus.
    Gen(GenArgs),
    /// Solve every instance in a directory and write a CSV summary.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Expected problem; the file's own tag is used when omitted.
    #[arg(long)]
    problem: Option<Problem>,
    #[arg(long, default_value_t = Mode::Fixed)]
    mode: Mode,
    #[arg(long, value_parser = parse_matching, default_value = "blossom")]
    matching: MatchingMode,
    #[arg(long = "in")]
    input: PathBuf,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also run the brute-force oracle (solve only).
    #[arg(long)]
    with_oracle: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, required_unless_present = "corpus")]
    problem: Option<Problem>,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    horizon: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.25)]
    volatility: f64,
    /// Instance path; standard output when omitted.
    #[arg(long, conflicts_with = "corpus")]
    out: Option<PathBuf>,
    /// Write the 50-instance benchmark corpus into this directory.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_matching, default_value = "blossom")]
    matching: MatchingMode,
    /// Leave out the wall-time column.
    #[arg(long)]
    no_timing: bool,
}

fn parse_matching(s: &str) -> Result<MatchingMode, String> {
    match s {
        "blossom" => Ok(MatchingMode::Blossom),
        "greedy" => Ok(MatchingMode::Greedy),
        other => Err(format!("unknown matching `{other}` (expected blossom or greedy)")),
    }
}

/// Exit status 2: bad input. Exit status 3: the solver failed.
enum Failure {
    Input(String),
    Solver(String),
}

impl From<msopt_core::Error> for Failure {
    fn from(e: msopt_core::Error) -> Self {
        match e {
            msopt_core::Error::Instance(_)
            | msopt_core::Error::Oracle(OracleError::InstanceTooLarge { .. }) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Solver(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_checked(args: &SolveArgs) -> Result<InstanceFile, Failure> {
    let file = load(&args.input)?;
    if let Some(p) = args.problem {
        if p != file.instance.problem() {
            return Err(Failure::Input(format!(
                "{}: file holds a {} instance, not {p}",
                args.input.display(),
                file.instance.problem()
            )));
        }
    }
    Ok(file)
}

fn lp_config() -> Result<LpConfig, Failure> {
    LpConfig::from_env().map_err(Failure::Input)
}

fn to_json(v: &msopt_core::io::SolveReport) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => {
            let file = load_checked(&args)?;
            let opts = SolveOptions {
                mode: args.mode,
                matching: args.matching,
                with_oracle: args.with_oracle,
                lp: lp_config()?,
            };
            let report = solve_report(&file, &opts)?;
            write_output(args.out.as_deref(), &to_json(&report))
        }
        Command::Oracle(args) => {
            let file = load_checked(&args)?;
            let report = oracle_report(&file)?;
            write_output(args.out.as_deref(), &to_json(&report))
        }
        Command::Gen(args) => {
            if let Some(dir) = args.corpus {
                fs::create_dir_all(&dir)
                    .map_err(|e| Failure::Solver(format!("cannot create {}: {e}", dir.display())))?;
                for f in generate_corpus() {
                    write_output(Some(&dir.join(format!("{}.json", f.id))), &f.to_json())?;
                }
                return Ok(());
            }
            let problem = args.problem.expect("clap requires --problem without --corpus");
            let f = generate_instance(problem, args.n, args.horizon, args.seed, args.volatility);
            write_output(args.out.as_deref(), &f.to_json())
        }
        Command::Bench(args) => {
            let mut paths: Vec<PathBuf> = fs::read_dir(&args.corpus)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.corpus.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            let files = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            let rows = bench_corpus(&files, args.matching, &lp_config()?)?;
            write_output(args.out.as_deref(), &rows_to_csv(&rows, !args.no_timing))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
