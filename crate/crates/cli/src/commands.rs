use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use dualprune::scores::{compute, ScoreRequest};
use dualprune::synthetic::{default_horizon, two_gaussians};
use dualprune::{
    generate_linear_log, moon_export, noise_report, read_log, select_with_scores, stability_report,
    verify, write_log, CoresetManifest, DynamicsLog, LogFormat, Preset, PruneConfig, ScoreTable,
    Strategy, TwoPointConfig,
};

use crate::{
    Command, PresetName, ReportCommand, ScoreArgs, ScoringArgs, SelectArgs, SynthArgs, TheoryArgs,
};

const DEFAULT_WINDOW: usize = 10;

/// A flag combination rejected before any computation starts.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(String);

/// At least one theory check failed; exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0} theory check(s) failed")]
pub struct TheoryFailure(usize);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// 1 for I/O, 3 for assumption violations and failed theory checks, 2 for
/// everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<dualprune::Error>() {
            return match e {
                dualprune::Error::Io(_) => 1,
                dualprune::Error::Assumption(_) => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<TheoryFailure>().is_some() {
            return 3;
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return 1;
        }
    }
    2
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Score(args) => score(args),
        Command::Select(args) => select(args),
        Command::Report(report) => match report {
            ReportCommand::Noise { manifest, log, out } => {
                report_noise(&manifest, &log, out.as_deref())
            }
            ReportCommand::Stability { scores, metric } => report_stability(&scores, metric),
            ReportCommand::Moon { log, t, j, out } => report_moon(&log, t, j, &out),
        },
        Command::Synth(args) => synth(args),
        Command::VerifyTheory(args) => verify_theory(args),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn load(path: &Path) -> Result<DynamicsLog> {
    read_log(path, LogFormat::from_path(path))
        .with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn dataset_preset(name: Option<PresetName>) -> Result<Option<Preset>> {
    Ok(match name {
        None => None,
        Some(PresetName::Cifar10) => Some(Preset::CIFAR10),
        Some(PresetName::Cifar100) => Some(Preset::CIFAR100),
        Some(PresetName::Imagenet) => Some(Preset::IMAGENET),
        Some(PresetName::D2) => return Err(usage("preset d2 applies only to verify-theory")),
    })
}

/// Resolves horizon and window flags against the preset and the log, then scores.
fn score_logs(
    args: &ScoringArgs,
    preset: Option<Preset>,
) -> Result<(Vec<DynamicsLog>, ScoreTable)> {
    let logs = args
        .logs
        .iter()
        .map(|p| load(p))
        .collect::<Result<Vec<_>>>()?;
    let t_max = logs[0].t_max();
    let t = args.t.or(preset.map(|p| p.t)).unwrap_or(t_max);
    let j = args
        .j
        .or(preset.map(|p| p.j))
        .unwrap_or(DEFAULT_WINDOW.min(t));
    let request = ScoreRequest {
        metric: args.metric,
        t,
        j,
        epoch: args.epoch.unwrap_or(t),
    };
    let table = compute(&logs, &request)?;
    Ok((logs, table))
}

fn summary(values: &[f64]) -> (f64, f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0
    };
    (sorted[0], median, sorted[k - 1])
}

fn score(args: ScoreArgs) -> Result<()> {
    let preset = dataset_preset(args.scoring.preset)?;
    let (_, table) = score_logs(&args.scoring, preset)?;
    let mut out = create(&args.out)?;
    table.write_csv(&mut out)?;
    out.flush()?;
    let (min, median, max) = summary(&table.values);
    println!(
        "{} over t={}: n={} min={min:.6e} median={median:.6e} max={max:.6e}",
        table.metric,
        table.t_used,
        table.len()
    );
    Ok(())
}

fn select(args: SelectArgs) -> Result<()> {
    let preset = dataset_preset(args.scoring.preset)?;
    let seed = match (args.strategy, args.seed) {
        (Strategy::BetaSampling, None) => {
            return Err(usage("--seed is required for the beta strategy"))
        }
        (_, seed) => seed.unwrap_or(0),
    };
    if !(0.0..1.0).contains(&args.r) {
        return Err(usage(format!("--r must lie in [0, 1), got {}", args.r)));
    }
    let (_, scores) = score_logs(&args.scoring, preset)?;
    let mut config = PruneConfig::new(args.r, args.strategy, seed);
    if let Some(p) = preset {
        config = config.with_preset(p);
    }
    config.t = scores.t_used;
    config.j = scores.j_used.unwrap_or(config.j);
    if let Some(c) = args.c_dataset {
        config.c_dataset = c;
    }
    if let Some(c) = args.big_c {
        config.big_c = c;
    }
    if let Some(k) = args.top_k {
        config.top_k_for_mu = k;
    }
    let manifest = select_with_scores(&scores, &config)?;
    let mut out = create(&args.out)?;
    manifest.write_json(&mut out)?;
    out.flush()?;
    println!(
        "{} / {}: kept {} of {} (r={})",
        manifest.metric,
        manifest.strategy,
        manifest.kept.len(),
        manifest.n(),
        manifest.r
    );
    Ok(())
}

fn report_noise(manifest: &Path, log: &Path, out: Option<&Path>) -> Result<()> {
    let file = File::open(manifest).with_context(|| format!("opening {}", manifest.display()))?;
    let manifest = CoresetManifest::read_json(BufReader::new(file))?;
    let report = noise_report(&manifest, &load(log)?)?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn report_stability(paths: &[std::path::PathBuf], metric: dualprune::Metric) -> Result<()> {
    let tables = paths
        .iter()
        .map(|p| {
            let file = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            // horizon and window are not stored in score CSVs and do not affect ranking
            Ok(ScoreTable::read_csv(BufReader::new(file), metric, 0, None)?)
        })
        .collect::<Result<Vec<_>>>()?;
    println!("{:.6}", stability_report(&tables)?);
    Ok(())
}

fn report_moon(log: &Path, t: usize, j: usize, out: &Path) -> Result<()> {
    let points = moon_export(&load(log)?, t, j)?;
    let mut w = create(out)?;
    dualprune::coreset::write_moon_csv(&points, &mut w)?;
    w.flush()?;
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    if args.epochs < 2 {
        return Err(usage("--epochs must be at least 2"));
    }
    let points = two_gaussians(args.n, [args.center, args.center], args.std, args.seed)?;
    let log = generate_linear_log(&points, args.flip, args.eta, args.epochs, args.seed)?;
    write_log(&log, &args.out, LogFormat::from_path(&args.out))
        .with_context(|| format!("writing {}", args.out.display()))?;
    let flipped = log
        .noise_flags()
        .map_or(0, |f| f.iter().filter(|&&x| x).count());
    println!(
        "wrote {} samples x {} epochs, {flipped} flipped labels",
        log.n(),
        log.t_max()
    );
    Ok(())
}

fn verify_theory(args: TheoryArgs) -> Result<()> {
    if let Some(p) = args.preset {
        if !matches!(p, PresetName::D2) {
            return Err(usage("verify-theory accepts only --preset d2"));
        }
    }
    let base = TwoPointConfig::reference();
    let eta = args.eta.unwrap_or(base.eta);
    let config = TwoPointConfig {
        x1: args.x1.unwrap_or(base.x1),
        x2: args.x2.unwrap_or(base.x2),
        eta,
        t_max: args.steps.unwrap_or_else(|| default_horizon(eta)),
        j: args.j,
    };
    let report = verify(&config)?;
    println!("{report}");
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut w = create(&dir.join("trajectory.csv"))?;
        report.trajectory.write_csv(&mut w)?;
        w.flush()?;
        let mut w = create(&dir.join("weights.csv"))?;
        report.trajectory.write_weights_csv(&mut w)?;
        w.flush()?;
    }
    if !report.passed() {
        return Err(TheoryFailure(report.checks.iter().filter(|c| !c.passed).count()).into());
    }
    Ok(())
}
