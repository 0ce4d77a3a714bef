use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualprune::{Metric, Strategy};

mod commands;

/// Training-dynamics scoring, coreset selection and two-point theory checks.
#[derive(Debug, Parser)]
#[command(name = "dualprune", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one score per sample and write it as CSV.
    Score(ScoreArgs),
    /// Score a log, prune it and write the coreset manifest.
    Select(SelectArgs),
    /// Evaluation reports over manifests and score tables.
    #[command(subcommand)]
    Report(ReportCommand),
    /// Generate a noisy two-Gaussian training log with a linear model.
    Synth(SynthArgs),
    /// Simulate the two-point system and check the theory's claims.
    VerifyTheory(TheoryArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetName {
    Cifar10,
    Cifar100,
    Imagenet,
    /// The two-point reference dataset; only meaningful for verify-theory.
    D2,
}

#[derive(Debug, Args)]
struct ScoringArgs {
    /// Input log (.csv for CSV, anything else for DYNL binary). Repeat for
    /// EL2N across independent runs.
    #[arg(long = "log", required = true)]
    logs: Vec<PathBuf>,
    #[arg(long, default_value = "dual", value_parser = parse_metric)]
    metric: Metric,
    /// Fills in --t, --j and --c-dataset; explicit flags win.
    #[arg(long, value_enum)]
    preset: Option<PresetName>,
    /// Scoring horizon in epochs (default: the preset's, else the whole log).
    #[arg(long)]
    t: Option<usize>,
    /// Window length (default 10).
    #[arg(long)]
    j: Option<usize>,
    /// Fixed epoch for el2n and entropy (default: the horizon).
    #[arg(long)]
    epoch: Option<usize>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    scoring: ScoringArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SelectArgs {
    #[command(flatten)]
    scoring: ScoringArgs,
    /// Pruning ratio in [0, 1).
    #[arg(long)]
    r: f64,
    #[arg(long, default_value = "threshold", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Required for the beta strategy.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    c_dataset: Option<f64>,
    #[arg(long)]
    big_c: Option<f64>,
    /// Number of top-scoring samples whose mean prediction sets mu.
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum ReportCommand {
    /// Share of injected-noise samples that a manifest pruned.
    Noise {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean Spearman correlation of score tables against their average.
    Stability {
        #[arg(long = "scores", required = true, num_args = 1..)]
        scores: Vec<PathBuf>,
        #[arg(long, default_value = "dual", value_parser = parse_metric)]
        metric: Metric,
    },
    /// Per-sample (std, mean) of the prediction over epochs 1..=t.
    Moon {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 10)]
        j: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Cluster centers are at (c, c) and (-c, -c).
    #[arg(long, default_value_t = 2.0)]
    center: f64,
    #[arg(long, default_value_t = 0.5)]
    std: f64,
    /// Fraction of labels to flip.
    #[arg(long, default_value_t = 0.1)]
    flip: f64,
    #[arg(long, default_value_t = 1e-3)]
    eta: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TheoryArgs {
    /// Only `d2` is accepted here.
    #[arg(long, value_enum)]
    preset: Option<PresetName>,
    /// First point as `a,b` (default 0.1,0.1).
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    x1: Option<[f64; 2]>,
    /// Second point as `a,b` (default 10,5).
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    x2: Option<[f64; 2]>,
    #[arg(long)]
    eta: Option<f64>,
    /// Gradient steps (default: max(30 / eta, 100)).
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 10)]
    j: usize,
    /// Directory for trajectory.csv and weights.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: dualprune::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: dualprune::Error| e.to_string())
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.parse().map_err(|_| format!("bad coordinate '{a}'"))?,
            b.parse().map_err(|_| format!("bad coordinate '{b}'"))?,
        ]),
        _ => Err(format!("expected 'a,b', got '{s}'")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
