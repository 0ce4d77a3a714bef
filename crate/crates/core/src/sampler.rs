//! Pruning-ratio-adaptive Beta weighting and seeded weighted sampling
//! without replacement.
//!
//! The Beta distribution keeps a fixed concentration `alpha + beta = C + 1`
//! while its mean slides toward easy (high prediction mean) samples as the
//! pruning ratio grows:
//!
//! ```text
//! beta_r  = max(C * (1 - mu_top) * (1 - r^c_D), 1e-9)
//! alpha_r = C - beta_r + 1
//! ```

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::scores::ScoreTable;

pub const DEFAULT_BIG_C: f64 = 15.0;
pub const DEFAULT_TOP_K_FOR_MU: usize = 10;
/// Floor applied to `beta_r` as `r -> 1`.
pub const BETA_FLOOR: f64 = 1e-9;
/// Prediction means are clamped to `[PDF_CLAMP, 1 - PDF_CLAMP]` before
/// evaluating the density.
pub const PDF_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub alpha: f64,
    pub beta: f64,
    pub c_dataset: f64,
    pub big_c: f64,
    pub mu_top: f64,
    pub r: f64,
}

impl BetaParams {
    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }
}

pub fn beta_params(r: f64, mu_top: f64, c_dataset: f64, big_c: f64) -> Result<BetaParams> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Range(format!("pruning ratio {r} outside [0, 1)")));
    }
    if !(0.0..=1.0).contains(&mu_top) {
        return Err(Error::Range(format!("mu_top {mu_top} outside [0, 1]")));
    }
    if !(c_dataset.is_finite() && c_dataset > 0.0) {
        return Err(Error::Range(format!(
            "c_dataset must be positive, got {c_dataset}"
        )));
    }
    if !(big_c.is_finite() && big_c > 0.0) {
        return Err(Error::Range(format!("C must be positive, got {big_c}")));
    }
    let beta = (big_c * (1.0 - mu_top) * (1.0 - r.powf(c_dataset))).max(BETA_FLOOR);
    Ok(BetaParams {
        alpha: big_c - beta + 1.0,
        beta,
        c_dataset,
        big_c,
        mu_top,
        r,
    })
}

/// Mean prediction of the `k` highest-scoring samples (ties: lower index first).
pub fn mu_top(scores: &ScoreTable, k: usize) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Shape("empty score table".into()));
    }
    if k == 0 || k > scores.len() {
        return Err(Error::Range(format!("k={k} outside 1..={}", scores.len())));
    }
    let top = top_indices(&scores.values, k);
    Ok(top.iter().map(|&i| scores.prediction_mean[i]).sum::<f64>() / k as f64)
}

/// Indices of the `k` largest values, larger first, ties by ascending index.
pub fn top_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn beta_pdf(x: f64, p: &BetaParams) -> Result<f64> {
    let x = x.clamp(PDF_CLAMP, 1.0 - PDF_CLAMP);
    let ln_pdf =
        (p.alpha - 1.0) * x.ln() + (p.beta - 1.0) * (-x).ln_1p() - ln_beta(p.alpha, p.beta);
    let pdf = ln_pdf.exp();
    if !pdf.is_finite() {
        return Err(Error::Numerical(format!(
            "Beta({}, {}) density at {x} is not finite",
            p.alpha, p.beta
        )));
    }
    Ok(pdf)
}

/// `pdf(prediction_mean) * score`, normalized to sum 1. Falls back to uniform
/// weights when every product is zero.
pub fn sampling_weights(scores: &ScoreTable, p: &BetaParams) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::Shape("empty score table".into()));
    }
    let mut w = scores
        .values
        .iter()
        .zip(&scores.prediction_mean)
        .map(|(&s, &m)| {
            if s < 0.0 {
                return Err(Error::Validation(format!(
                    "negative score {s} cannot weight sampling"
                )));
            }
            Ok(beta_pdf(m, p)? * s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = w.iter().sum();
    if total > 0.0 && total.is_finite() {
        w.iter_mut().for_each(|x| *x /= total);
    } else {
        log::warn!("all sampling weights are zero; falling back to uniform weights");
        let u = 1.0 / w.len() as f64;
        w.iter_mut().for_each(|x| *x = u);
    }
    Ok(w)
}

/// Draws `m` distinct indices by exponential keys: index `i` gets key
/// `ln(u_i) / w_i` and the `m` largest keys win. Zero-weight indices only
/// fill remaining slots, in uniformly random order. Output is sorted.
pub fn sample_without_replacement(weights: &[f64], m: usize, seed: u64) -> Result<Vec<usize>> {
    let n = weights.len();
    if m > n {
        return Err(Error::Range(format!("cannot draw {m} of {n} indices")));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::Validation(format!("invalid sampling weight {w}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (positive weight, key) ordered lexicographically
    let mut keyed: Vec<(bool, f64, usize)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            // 1 - [0, 1) keeps u in (0, 1]
            let u: f64 = 1.0 - rng.random::<f64>();
            if w > 0.0 {
                (true, u.ln() / w, i)
            } else {
                (false, u, i)
            }
        })
        .collect();
    let cmp = |a: &(bool, f64, usize), b: &(bool, f64, usize)| {
        b.0.cmp(&a.0)
            .then(b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal))
            .then(a.2.cmp(&b.2))
    };
    if m < n && m > 0 {
        keyed.select_nth_unstable_by(m - 1, cmp);
    }
    let mut chosen: Vec<usize> = keyed[..m].iter().map(|k| k.2).collect();
    chosen.sort_unstable();
    Ok(chosen)
}

/// `floor((1 - r) * n)`, at least 1.
pub fn coreset_size(n: usize, r: f64) -> usize {
    // the epsilon absorbs representation error, e.g. (1 - 0.9) * 1000 = 99.999...
    let m = ((1.0 - r) * n as f64 + 1e-9).floor() as usize;
    m.clamp(1, n.max(1))
}
