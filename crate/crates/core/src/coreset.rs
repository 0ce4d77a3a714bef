//! End-to-end coreset selection and evaluation reports.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsLog;
use crate::error::{Error, Result};
use crate::rank::spearman;
use crate::sampler::{
    beta_params, coreset_size, mu_top, sample_without_replacement, sampling_weights, top_indices,
    DEFAULT_BIG_C, DEFAULT_TOP_K_FOR_MU,
};
use crate::scores::{dual_score, Metric, Preset, ScoreTable};
use crate::window::moments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Keep the highest-scoring samples.
    Threshold,
    /// Draw the coreset from Beta-weighted scores.
    #[serde(rename = "beta")]
    BetaSampling,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Threshold => "threshold",
            Strategy::BetaSampling => "beta",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "threshold" => Ok(Strategy::Threshold),
            "beta" | "beta-sampling" | "betasampling" => Ok(Strategy::BetaSampling),
            other => Err(Error::Validation(format!("unknown strategy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    /// Fraction of the dataset to discard.
    pub r: f64,
    pub t: usize,
    pub j: usize,
    pub c_dataset: f64,
    pub big_c: f64,
    pub seed: u64,
    pub strategy: Strategy,
    pub top_k_for_mu: usize,
}

impl PruneConfig {
    pub fn new(r: f64, strategy: Strategy, seed: u64) -> Self {
        let p = Preset::CIFAR10;
        Self {
            r,
            t: p.t,
            j: p.j,
            c_dataset: p.c_dataset,
            big_c: DEFAULT_BIG_C,
            seed,
            strategy,
            top_k_for_mu: DEFAULT_TOP_K_FOR_MU,
        }
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.t = preset.t;
        self.j = preset.j;
        self.c_dataset = preset.c_dataset;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..1.0).contains(&self.r) {
            return Err(Error::Range(format!(
                "pruning ratio {} outside [0, 1)",
                self.r
            )));
        }
        if n == 0 {
            return Err(Error::Shape("cannot select from an empty dataset".into()));
        }
        if self.top_k_for_mu == 0 {
            return Err(Error::Validation("top_k_for_mu must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoresetManifest {
    pub metric: Metric,
    pub strategy: Strategy,
    pub r: f64,
    pub t: usize,
    pub j: usize,
    pub c_dataset: f64,
    pub big_c: f64,
    pub seed: u64,
    #[serde(default = "default_top_k")]
    pub top_k_for_mu: usize,
    pub kept: Vec<usize>,
    pub pruned: Vec<usize>,
    /// Sampling weights, present for Beta sampling. Not serialized; replaying
    /// the config regenerates them.
    #[serde(skip)]
    pub weights: Option<Vec<f64>>,
}

fn default_top_k() -> usize {
    DEFAULT_TOP_K_FOR_MU
}

impl CoresetManifest {
    pub fn n(&self) -> usize {
        self.kept.len() + self.pruned.len()
    }

    pub fn config(&self) -> PruneConfig {
        PruneConfig {
            r: self.r,
            t: self.t,
            j: self.j,
            c_dataset: self.c_dataset,
            big_c: self.big_c,
            seed: self.seed,
            strategy: self.strategy,
            top_k_for_mu: self.top_k_for_mu,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_json()?.as_bytes())?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        let m: CoresetManifest = serde_json::from_reader(r)?;
        m.check_partition()?;
        Ok(m)
    }

    fn check_partition(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &i in self.kept.iter().chain(&self.pruned) {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Validation(format!(
                    "kept/pruned do not partition 0..{n} (index {i})"
                )));
            }
        }
        Ok(())
    }
}

/// Runs the full pipeline with DUAL scores: score, pick a strategy, partition.
pub fn select(log: &DynamicsLog, config: &PruneConfig) -> Result<CoresetManifest> {
    config.validate(log.n())?;
    let scores = dual_score(log, config.t, config.j)?;
    select_with_scores(&scores, config)
}

/// Selection over a precomputed score table. Every metric keeps its
/// highest-scoring samples.
pub fn select_with_scores(scores: &ScoreTable, config: &PruneConfig) -> Result<CoresetManifest> {
    let n = scores.len();
    config.validate(n)?;
    scores.validate()?;
    let m = coreset_size(n, config.r);
    let (kept, weights) = match config.strategy {
        Strategy::Threshold => {
            let mut kept = top_indices(&scores.values, m);
            kept.sort_unstable();
            (kept, None)
        }
        Strategy::BetaSampling => {
            let mu = mu_top(scores, config.top_k_for_mu.min(n))?;
            let params = beta_params(config.r, mu, config.c_dataset, config.big_c)?;
            let weights = sampling_weights(scores, &params)?;
            let kept = sample_without_replacement(&weights, m, config.seed)?;
            (kept, Some(weights))
        }
    };
    let mut is_kept = vec![false; n];
    kept.iter().for_each(|&i| is_kept[i] = true);
    let pruned = (0..n).filter(|&i| !is_kept[i]).collect();
    Ok(CoresetManifest {
        metric: scores.metric,
        strategy: config.strategy,
        r: config.r,
        t: scores.t_used,
        j: scores.j_used.unwrap_or(config.j),
        c_dataset: config.c_dataset,
        big_c: config.big_c,
        seed: config.seed,
        top_k_for_mu: config.top_k_for_mu,
        kept,
        pruned,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseReport {
    /// Share of pruned samples that carry injected noise.
    pub pruned_noise_fraction: f64,
    /// Share of noisy samples that were pruned.
    pub noise_recall: f64,
    /// Best achievable recall at this pruning ratio: `min(1, r * n / #noisy)`.
    pub optimal_recall: f64,
}

impl NoiseReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.serialize(self)?;
        wtr.flush()?;
        Ok(())
    }
}

pub fn noise_report(manifest: &CoresetManifest, log: &DynamicsLog) -> Result<NoiseReport> {
    let flags = log
        .noise_flags()
        .ok_or_else(|| Error::Metadata("log carries no noise flags".into()))?;
    if manifest.n() != flags.len() {
        return Err(Error::Shape(format!(
            "manifest covers {} samples, log has {}",
            manifest.n(),
            flags.len()
        )));
    }
    let noisy = flags.iter().filter(|&&f| f).count();
    let pruned_noisy = manifest.pruned.iter().filter(|&&i| flags[i]).count();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let optimal_recall = if noisy == 0 {
        1.0
    } else {
        (manifest.r * flags.len() as f64 / noisy as f64).min(1.0)
    };
    Ok(NoiseReport {
        pruned_noise_fraction: ratio(pruned_noisy, manifest.pruned.len()),
        noise_recall: ratio(pruned_noisy, noisy),
        optimal_recall,
    })
}

/// One point of the (std, mean) scatter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoonPoint {
    pub sample_id: usize,
    pub std: f64,
    pub mean: f64,
}

/// Sample std and mean of each sample's `p_target` over epochs `1..=t`.
/// `j` is checked against `t` so the export lines up with a scoring run.
pub fn moon_export(log: &DynamicsLog, t: usize, j: usize) -> Result<Vec<MoonPoint>> {
    if t == 0 || t > log.t_max() {
        return Err(Error::Range(format!(
            "horizon {t} outside 1..={}",
            log.t_max()
        )));
    }
    crate::window::check_window(t, j)?;
    Ok((0..log.n())
        .map(|i| {
            let m = moments(&log.p_target_series(i, t));
            MoonPoint {
                sample_id: i,
                std: m.std(),
                mean: m.mean,
            }
        })
        .collect())
}

pub fn write_moon_csv<W: Write>(points: &[MoonPoint], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for p in points {
        wtr.serialize(p)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Mean Spearman correlation of each table against the element-wise mean
/// of all tables.
pub fn stability_report(tables: &[ScoreTable]) -> Result<f64> {
    if tables.len() < 2 {
        return Err(Error::Shape(
            "stability needs at least two score tables".into(),
        ));
    }
    let n = tables[0].len();
    let metric = tables[0].metric;
    for t in tables {
        if t.metric != metric {
            return Err(Error::Metadata(format!(
                "mixed metrics: {} and {}",
                metric, t.metric
            )));
        }
        if t.len() != n {
            return Err(Error::Shape(format!(
                "tables disagree on n: {} vs {n}",
                t.len()
            )));
        }
    }
    let k = tables.len() as f64;
    let mean: Vec<f64> = (0..n)
        .map(|i| tables.iter().map(|t| t.values[i]).sum::<f64>() / k)
        .collect();
    let total = tables
        .iter()
        .map(|t| spearman(&t.values, &mean))
        .sum::<Result<f64>>()?;
    Ok(total / k)
}
