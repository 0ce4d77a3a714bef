//! Per-sample importance scores computed from a [`DynamicsLog`].
//!
//! Every score is a pure function of one sample's records; samples are
//! processed independently and each sample accumulates in ascending epoch
//! order, so results never depend on how samples are partitioned.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsLog;
use crate::error::{Error, Result};
use crate::window::{check_window, sliding_moments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "dual")]
    Dual,
    #[serde(rename = "dyn-unc")]
    DynUnc,
    #[serde(rename = "el2n")]
    El2n,
    #[serde(rename = "aum")]
    Aum,
    #[serde(rename = "forgetting")]
    Forgetting,
    #[serde(rename = "entropy")]
    Entropy,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Dual,
        Metric::DynUnc,
        Metric::El2n,
        Metric::Aum,
        Metric::Forgetting,
        Metric::Entropy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Dual => "dual",
            Metric::DynUnc => "dyn-unc",
            Metric::El2n => "el2n",
            Metric::Aum => "aum",
            Metric::Forgetting => "forgetting",
            Metric::Entropy => "entropy",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == key || (key == "dynunc" && *m == Metric::DynUnc))
            .ok_or_else(|| Error::Validation(format!("unknown metric '{s}'")))
    }
}

/// Scoring hyperparameters `(T, J, c_D)` tuned per dataset family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub t: usize,
    pub j: usize,
    pub c_dataset: f64,
}

impl Preset {
    pub const CIFAR10: Preset = Preset {
        name: "cifar10",
        t: 30,
        j: 10,
        c_dataset: 5.5,
    };
    pub const CIFAR100: Preset = Preset {
        name: "cifar100",
        t: 30,
        j: 10,
        c_dataset: 4.0,
    };
    pub const IMAGENET: Preset = Preset {
        name: "imagenet",
        t: 60,
        j: 10,
        c_dataset: 11.0,
    };

    pub fn by_name(name: &str) -> Option<Preset> {
        [Self::CIFAR10, Self::CIFAR100, Self::IMAGENET]
            .into_iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
    }
}

/// One scalar per sample for a single metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub metric: Metric,
    pub values: Vec<f64>,
    /// Epoch horizon the score was computed over.
    pub t_used: usize,
    /// Window length, for the windowed metrics.
    pub j_used: Option<usize>,
    /// Mean `p_target` over epochs `1..=t_used`; feeds Beta sampling.
    pub prediction_mean: Vec<f64>,
}

impl ScoreTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["sample_id", "score", "prediction_mean"])?;
        for (i, (s, m)) in self.values.iter().zip(&self.prediction_mean).enumerate() {
            wtr.write_record(&[i.to_string(), s.to_string(), m.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads `sample_id,score,prediction_mean`. The CSV carries no metric or
    /// horizon, so the caller supplies them.
    pub fn read_csv<R: Read>(
        r: R,
        metric: Metric,
        t_used: usize,
        j_used: Option<usize>,
    ) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header
            .iter()
            .map(str::trim)
            .ne(["sample_id", "score", "prediction_mean"])
        {
            return Err(Error::Format(
                "expected header 'sample_id,score,prediction_mean'".into(),
            ));
        }
        let mut rows: Vec<(usize, f64, f64)> = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let parse = |k: usize| -> Result<f64> {
                row[k]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("cannot parse '{}'", &row[k])))
            };
            let id: usize = row[0]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad sample_id '{}'", &row[0])))?;
            rows.push((id, parse(1)?, parse(2)?));
        }
        rows.sort_by_key(|r| r.0);
        if rows.iter().enumerate().any(|(k, r)| r.0 != k) {
            return Err(Error::IncompleteLog(
                "score table sample ids are not 0..n".into(),
            ));
        }
        let table = ScoreTable {
            metric,
            values: rows.iter().map(|r| r.1).collect(),
            t_used,
            j_used,
            prediction_mean: rows.iter().map(|r| r.2).collect(),
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.prediction_mean.len() {
            return Err(Error::Shape(
                "values and prediction_mean differ in length".into(),
            ));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite score at sample {i}")));
        }
        if let Some(i) = self
            .prediction_mean
            .iter()
            .position(|m| !(0.0..=1.0 + 1e-6).contains(m))
        {
            return Err(Error::Validation(format!(
                "prediction mean out of [0, 1] at sample {i}"
            )));
        }
        Ok(())
    }
}

fn check_horizon(log: &DynamicsLog, t: usize) -> Result<()> {
    if t == 0 || t > log.t_max() {
        return Err(Error::Range(format!(
            "horizon {t} outside 1..={}",
            log.t_max()
        )));
    }
    Ok(())
}

fn prediction_means(log: &DynamicsLog, t: usize) -> Vec<f64> {
    (0..log.n())
        .map(|i| {
            let s: f64 = log.sample(i)[..t].iter().map(|r| r.p_target as f64).sum();
            (s / t as f64).clamp(0.0, 1.0)
        })
        .collect()
}

/// Sample standard deviation of every length-`j` window of `series`.
pub fn windowed_uncertainty(series: &[f64], j: usize) -> Result<Vec<f64>> {
    Ok(sliding_moments(series, j)?
        .iter()
        .map(|m| m.std())
        .collect())
}

fn windowed_score(
    log: &DynamicsLog,
    t: usize,
    j: usize,
    metric: Metric,
    per_window: impl Fn(f64, f64) -> f64,
) -> Result<ScoreTable> {
    check_horizon(log, t)?;
    check_window(t, j)?;
    let values = (0..log.n())
        .map(|i| {
            let series = log.p_target_series(i, t);
            let windows = sliding_moments(&series, j)?;
            let total: f64 = windows.iter().map(|m| per_window(m.mean, m.std())).sum();
            Ok(total / windows.len() as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreTable {
        metric,
        values,
        t_used: t,
        j_used: Some(j),
        prediction_mean: prediction_means(log, t),
    })
}

/// Mean windowed prediction std over epochs `1..=t`.
pub fn dyn_unc(log: &DynamicsLog, t: usize, j: usize) -> Result<ScoreTable> {
    windowed_score(log, t, j, Metric::DynUnc, |_, std| std)
}

/// Mean over windows of `(1 - window mean) * window std` over epochs `1..=t`.
pub fn dual_score(log: &DynamicsLog, t: usize, j: usize) -> Result<ScoreTable> {
    windowed_score(log, t, j, Metric::Dual, |mean, std| (1.0 - mean) * std)
}

/// EL2N at `epoch`, averaged across independent runs.
pub fn el2n_score(logs: &[DynamicsLog], epoch: usize) -> Result<ScoreTable> {
    let first = logs
        .first()
        .ok_or_else(|| Error::Shape("el2n needs at least one log".into()))?;
    let n = first.n();
    for log in logs {
        if log.n() != n {
            return Err(Error::Shape(format!(
                "logs disagree on n: {} vs {n}",
                log.n()
            )));
        }
        check_horizon(log, epoch)?;
    }
    let runs = logs.len() as f64;
    let values = (0..n)
        .map(|i| {
            logs.iter()
                .map(|l| l.record(i, epoch).el2n as f64)
                .sum::<f64>()
                / runs
        })
        .collect();
    let mut prediction_mean = vec![0.0; n];
    for log in logs {
        for (acc, m) in prediction_mean.iter_mut().zip(prediction_means(log, epoch)) {
            *acc += m;
        }
    }
    prediction_mean.iter_mut().for_each(|m| *m /= runs);
    Ok(ScoreTable {
        metric: Metric::El2n,
        values,
        t_used: epoch,
        j_used: None,
        prediction_mean,
    })
}

/// Mean margin `p_target - p_runner_up` over epochs `1..=t`.
pub fn aum_score(log: &DynamicsLog, t: usize) -> Result<ScoreTable> {
    check_horizon(log, t)?;
    let values = (0..log.n())
        .map(|i| {
            log.sample(i)[..t]
                .iter()
                .map(|r| r.p_target as f64 - r.p_runner_up as f64)
                .sum::<f64>()
                / t as f64
        })
        .collect();
    Ok(ScoreTable {
        metric: Metric::Aum,
        values,
        t_used: t,
        j_used: None,
        prediction_mean: prediction_means(log, t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForgettingOptions {
    /// Score never-learned samples as `t` (maximally forgettable) instead of 0.
    pub never_learned_sentinel: bool,
}

impl Default for ForgettingOptions {
    fn default() -> Self {
        Self {
            never_learned_sentinel: true,
        }
    }
}

/// Number of correct-to-incorrect transitions within epochs `1..=t`.
pub fn forgetting_score(log: &DynamicsLog, t: usize) -> Result<ScoreTable> {
    forgetting_score_with(log, t, ForgettingOptions::default())
}

pub fn forgetting_score_with(
    log: &DynamicsLog,
    t: usize,
    opts: ForgettingOptions,
) -> Result<ScoreTable> {
    check_horizon(log, t)?;
    let values = (0..log.n())
        .map(|i| {
            let recs = &log.sample(i)[..t];
            if opts.never_learned_sentinel && !recs.iter().any(|r| r.correct) {
                return t as f64;
            }
            recs.windows(2)
                .filter(|w| w[0].correct && !w[1].correct)
                .count() as f64
        })
        .collect();
    Ok(ScoreTable {
        metric: Metric::Forgetting,
        values,
        t_used: t,
        j_used: None,
        prediction_mean: prediction_means(log, t),
    })
}

/// Stored prediction entropy (nats) at `epoch`.
pub fn entropy_score(log: &DynamicsLog, epoch: usize) -> Result<ScoreTable> {
    check_horizon(log, epoch)?;
    Ok(ScoreTable {
        metric: Metric::Entropy,
        values: (0..log.n())
            .map(|i| log.record(i, epoch).entropy as f64)
            .collect(),
        t_used: epoch,
        j_used: None,
        prediction_mean: prediction_means(log, epoch),
    })
}

/// Knobs shared by every metric; fields a metric does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRequest {
    pub metric: Metric,
    /// Horizon for windowed metrics, AUM and Forgetting.
    pub t: usize,
    pub j: usize,
    /// Fixed epoch for EL2N and Entropy.
    pub epoch: usize,
}

/// Dispatches to the metric named in `req`. EL2N averages across all `logs`;
/// the other metrics read only the first.
pub fn compute(logs: &[DynamicsLog], req: &ScoreRequest) -> Result<ScoreTable> {
    let first = logs
        .first()
        .ok_or_else(|| Error::Shape("no log supplied".into()))?;
    match req.metric {
        Metric::Dual => dual_score(first, req.t, req.j),
        Metric::DynUnc => dyn_unc(first, req.t, req.j),
        Metric::El2n => el2n_score(logs, req.epoch),
        Metric::Aum => aum_score(first, req.t),
        Metric::Forgetting => forgetting_score(first, req.t),
        Metric::Entropy => entropy_score(first, req.epoch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::EpochRecord;

    fn log_from_series(series: &[&[f32]]) -> DynamicsLog {
        let t = series[0].len();
        let records = series
            .iter()
            .flat_map(|s| {
                s.iter().map(|&p| EpochRecord {
                    p_target: p,
                    p_runner_up: 1.0 - p,
                    el2n: std::f32::consts::SQRT_2 * (1.0 - p),
                    entropy: 0.0,
                    correct: p > 0.5,
                })
            })
            .collect();
        DynamicsLog::new(series.len(), t, records, None, None).unwrap()
    }

    #[test]
    fn windowed_uncertainty_examples() {
        assert!(windowed_uncertainty(&[0.7; 10], 5)
            .unwrap()
            .iter()
            .all(|&u| u == 0.0));
        let u = windowed_uncertainty(&[0.2, 0.4, 0.6], 3).unwrap();
        assert_eq!(u.len(), 1);
        assert!((u[0] - 0.2).abs() < 1e-12);
        let u = windowed_uncertainty(&[0.0, 1.0], 2).unwrap();
        assert!((u[0] - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn windowed_uncertainty_errors() {
        assert!(matches!(
            windowed_uncertainty(&[0.1, 0.2], 3),
            Err(Error::Window(_))
        ));
        assert!(matches!(
            windowed_uncertainty(&[0.1, 0.2], 1),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn dyn_unc_and_dual_examples() {
        // f32 storage: 0.2/0.4/0.6/0.8 are not exact, so compare loosely
        let log = log_from_series(&[&[0.2, 0.4, 0.6, 0.8], &[0.3; 4]]);
        let du = dyn_unc(&log, 4, 3).unwrap();
        assert!((du.values[0] - 0.2).abs() < 1e-7);
        assert_eq!(du.values[1], 0.0);
        let d = dual_score(&log, 4, 3).unwrap();
        assert!((d.values[0] - 0.10).abs() < 1e-7);
        assert_eq!(d.values[1], 0.0);
        let d3 = dual_score(&log, 3, 3).unwrap();
        assert!((d3.values[0] - 0.12).abs() < 1e-7);
        assert!((d3.prediction_mean[0] - 0.4).abs() < 1e-7);
        assert_eq!(d3.j_used, Some(3));
    }

    #[test]
    fn window_longer_than_horizon() {
        let log = log_from_series(&[&[0.2, 0.4, 0.6]]);
        assert!(matches!(dual_score(&log, 3, 4), Err(Error::Window(_))));
        assert!(matches!(dual_score(&log, 4, 2), Err(Error::Range(_))));
    }

    #[test]
    fn aum_examples() {
        let mk = |pt: f32, pr: f32| EpochRecord {
            p_target: pt,
            p_runner_up: pr,
            el2n: 0.0,
            entropy: 0.0,
            correct: true,
        };
        let records = vec![
            mk(0.55, 0.45),
            mk(0.4, 0.6),
            mk(0.65, 0.35),
            mk(1.0, 0.0),
            mk(1.0, 0.0),
            mk(1.0, 0.0),
        ];
        let log = DynamicsLog::new(2, 3, records, None, None).unwrap();
        let aum = aum_score(&log, 3).unwrap();
        assert!((aum.values[0] - 0.2 / 3.0).abs() < 1e-6);
        assert_eq!(aum.values[1], 1.0);
        let tied = DynamicsLog::new(1, 1, vec![mk(0.4, 0.4)], None, None).unwrap();
        assert_eq!(aum_score(&tied, 1).unwrap().values[0], 0.0);
    }

    fn correctness_log(pattern: &[bool]) -> DynamicsLog {
        let records = pattern
            .iter()
            .map(|&c| EpochRecord {
                p_target: 0.5,
                p_runner_up: 0.5,
                el2n: 0.0,
                entropy: 0.0,
                correct: c,
            })
            .collect();
        DynamicsLog::new(1, pattern.len(), records, None, None).unwrap()
    }

    #[test]
    fn forgetting_examples() {
        let always = correctness_log(&[true; 5]);
        assert_eq!(forgetting_score(&always, 5).unwrap().values[0], 0.0);
        let flips = correctness_log(&[true, false, true, false, true]);
        assert_eq!(forgetting_score(&flips, 5).unwrap().values[0], 2.0);
        let never = correctness_log(&[false; 30]);
        assert_eq!(forgetting_score(&never, 30).unwrap().values[0], 30.0);
        let off = ForgettingOptions {
            never_learned_sentinel: false,
        };
        assert_eq!(
            forgetting_score_with(&never, 30, off).unwrap().values[0],
            0.0
        );
    }

    #[test]
    fn el2n_averages_runs() {
        let mk = |e: f32| EpochRecord {
            p_target: 0.5,
            p_runner_up: 0.5,
            el2n: e,
            entropy: 0.0,
            correct: true,
        };
        let a = DynamicsLog::new(1, 20, vec![mk(0.5); 20], None, None).unwrap();
        let b = DynamicsLog::new(1, 20, vec![mk(0.7); 20], None, None).unwrap();
        let s = el2n_score(&[a.clone(), b], 20).unwrap();
        assert!((s.values[0] - 0.6).abs() < 1e-7);
        assert_eq!(
            el2n_score(std::slice::from_ref(&a), 20).unwrap().values[0],
            0.5
        );
        assert!(matches!(
            el2n_score(std::slice::from_ref(&a), 21),
            Err(Error::Range(_))
        ));
        let c = DynamicsLog::new(2, 20, vec![mk(0.7); 40], None, None).unwrap();
        assert!(matches!(el2n_score(&[a, c], 1), Err(Error::Shape(_))));
    }

    #[test]
    fn entropy_projection() {
        let mk = |h: f32| EpochRecord {
            p_target: 0.5,
            p_runner_up: 0.5,
            el2n: 0.0,
            entropy: h,
            correct: true,
        };
        let log =
            DynamicsLog::new(2, 1, vec![mk(std::f32::consts::LN_2), mk(0.0)], None, None).unwrap();
        let s = entropy_score(&log, 1).unwrap();
        assert!((s.values[0] - std::f64::consts::LN_2).abs() < 1e-4);
        assert_eq!(s.values[1], 0.0);
    }

    #[test]
    fn presets() {
        let p = Preset::by_name("cifar100").unwrap();
        assert_eq!((p.t, p.j, p.c_dataset), (30, 10, 4.0));
        assert_eq!(Preset::by_name("CIFAR10").unwrap().c_dataset, 5.5);
        assert_eq!(Preset::by_name("imagenet").unwrap().t, 60);
        assert!(Preset::by_name("mnist").is_none());
    }

    #[test]
    fn metric_parsing() {
        for m in Metric::ALL {
            assert_eq!(m.as_str().parse::<Metric>().unwrap(), m);
        }
        assert_eq!("DynUnc".parse::<Metric>().unwrap(), Metric::DynUnc);
        assert!("tdds".parse::<Metric>().is_err());
    }

    #[test]
    fn score_csv_round_trip() {
        let log = log_from_series(&[&[0.2, 0.4, 0.6, 0.8], &[0.3, 0.5, 0.2, 0.9]]);
        let table = dual_score(&log, 4, 2).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let back = ScoreTable::read_csv(buf.as_slice(), Metric::Dual, 4, Some(2)).unwrap();
        assert_eq!(back, table);
    }
}
