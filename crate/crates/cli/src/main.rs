//! `memsys-evo`: optimize, enumerate, compare, sweep and plot memory system
//! parameterizations from the command line.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 estimator failure,
//! 3 capacity exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use memsys_evo::{Error, Result};

mod commands;
mod output;
mod plot;

#[derive(Parser, Debug)]
#[command(name = "memsys-evo", version, about = "System-level tuning of embedded memory parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run differential evolution with Pareto selection, once per repetition.
    Optimize(OptimizeArgs),
    /// Enumerate every feasible system combination and extract the exact front.
    Exhaustive(ExhaustiveArgs),
    /// Report how found fronts deviate from a reference front.
    Compare(CompareArgs),
    /// Run every combination of hyperparameter grids.
    Sweep(SweepArgs),
    /// Draw fronts as an SVG scatter of the first two objectives.
    Plot(PlotArgs),
    /// Write a synthetic or toy catalog and system.
    Generate(GenerateArgs),
    /// Answer estimator requests on stdin/stdout with the built-in surrogate.
    EstimatorServe(ServeArgs),
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    #[arg(long)]
    catalog: PathBuf,
    #[arg(long)]
    system: PathBuf,
    /// `surrogate` or `exec:COMMAND`.
    #[arg(long, default_value = "surrogate")]
    backend: String,
    /// Seconds to wait for each external estimator batch.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    pop: usize,
    #[arg(long, default_value_t = 50)]
    gens: usize,
    #[arg(long, default_value_t = 0.9)]
    cr: f64,
    #[arg(long, default_value_t = 0.8)]
    f: f64,
    /// Repetition k runs with seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

#[derive(Args, Debug)]
struct ExhaustiveArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: PathBuf,
    /// Largest number of system combinations to accept.
    #[arg(long, default_value_t = memsys_evo::baseline::DEFAULT_COMBO_CAP)]
    cap: u128,
    /// Largest number of candidates per memory.
    #[arg(long, default_value_t = memsys_evo::baseline::DEFAULT_CANDIDATE_CAP)]
    candidate_cap: u128,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Front files of the repetitions.
    #[arg(required = true)]
    found: Vec<PathBuf>,
    /// Reference front, usually from `exhaustive`.
    #[arg(long)]
    baseline: PathBuf,
    /// Directory for `deviation.csv` and `deviation.md`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated population sizes.
    #[arg(long, default_value = "20")]
    pop: String,
    /// Comma-separated generation counts.
    #[arg(long, default_value = "50")]
    gens: String,
    /// Comma-separated crossover probabilities.
    #[arg(long, default_value = "0.9")]
    cr: String,
    /// Comma-separated differential weights.
    #[arg(long, default_value = "0.8")]
    f: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Front files, one marker shape each.
    found: Vec<PathBuf>,
    /// Reference front; both axes are scaled so it spans [0, 1].
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// SVG file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    out: PathBuf,
    /// Write the two-memory toy example instead of a synthetic system.
    #[arg(long)]
    toy: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    memories: usize,
    #[arg(long, default_value_t = 4)]
    compilers: usize,
    /// Approximate feasible candidates per memory.
    #[arg(long, default_value_t = 200)]
    candidates: usize,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long)]
    catalog: PathBuf,
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("MEMSYS_EVO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("MEMSYS_EVO_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidInput(format!("cannot start {threads} worker threads: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Optimize(args) => commands::optimize(args),
        Command::Exhaustive(args) => commands::exhaustive(args),
        Command::Compare(args) => commands::compare(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Plot(args) => commands::plot(args),
        Command::Generate(args) => commands::generate(args),
        Command::EstimatorServe(args) => commands::estimator_serve(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
