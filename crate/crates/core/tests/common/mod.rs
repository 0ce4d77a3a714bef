//! Random log builders and brute-force reference implementations shared by
//! the integration tests. Nothing here calls into the library's scoring code.

#![allow(dead_code)]

use dualprune::{DynamicsLog, EpochRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random but valid record; `p` is forced onto a coarse grid now and then
/// so that windows with exact ties and constant stretches show up.
pub fn random_record(rng: &mut impl Rng) -> EpochRecord {
    let p: f32 = match rng.random_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        2 => rng.random_range(0..5) as f32 / 4.0,
        _ => rng.random(),
    };
    let runner_up = (1.0 - p) * rng.random::<f32>();
    EpochRecord {
        p_target: p,
        p_runner_up: runner_up,
        el2n: rng.random::<f32>() * 1.5,
        entropy: rng.random::<f32>() * 3.0,
        correct: rng.random(),
    }
}

/// Random log; each sample is either i.i.d. noise, a smooth ramp or constant.
pub fn random_log(rng: &mut impl Rng, n: usize, t_max: usize, metadata: bool) -> DynamicsLog {
    let mut records = Vec::with_capacity(n * t_max);
    for _ in 0..n {
        let kind = rng.random_range(0..4);
        let start: f32 = rng.random();
        let end: f32 = rng.random();
        for e in 0..t_max {
            let mut rec = random_record(rng);
            match kind {
                0 => {
                    let a = e as f32 / (t_max.max(2) - 1) as f32;
                    rec.p_target = start + (end - start) * a;
                    rec.p_runner_up = (1.0 - rec.p_target) * 0.5;
                }
                1 => {
                    rec.p_target = start;
                    rec.p_runner_up = 0.0;
                }
                _ => {}
            }
            records.push(rec);
        }
    }
    let (labels, flags) = if metadata {
        (
            Some((0..n).map(|_| rng.random_range(0..10)).collect()),
            Some((0..n).map(|_| rng.random_bool(0.2)).collect()),
        )
    } else {
        (None, None)
    };
    DynamicsLog::new(n, t_max, records, labels, flags).expect("generated log is valid")
}

pub fn seeded_log(seed: u64, n: usize, t_max: usize) -> DynamicsLog {
    random_log(&mut ChaCha8Rng::seed_from_u64(seed), n, t_max, true)
}

fn series(log: &DynamicsLog, i: usize, t: usize) -> Vec<f64> {
    (1..=t).map(|e| log.record(i, e).p_target as f64).collect()
}

/// Textbook mean and `n - 1` variance, no shifting tricks.
pub fn naive_mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut mean = 0.0;
    for x in xs {
        mean += x;
    }
    mean /= n;
    let mut ss = 0.0;
    for x in xs {
        ss += (x - mean) * (x - mean);
    }
    (mean, ss / (n - 1.0))
}

fn naive_windowed(log: &DynamicsLog, t: usize, j: usize, dual: bool) -> Vec<f64> {
    (0..log.n())
        .map(|i| {
            let s = series(log, i, t);
            let mut total = 0.0;
            let mut count = 0;
            for k in 0..=(t - j) {
                let (mean, var) = naive_mean_var(&s[k..k + j]);
                let std = var.sqrt();
                total += if dual { (1.0 - mean) * std } else { std };
                count += 1;
            }
            total / count as f64
        })
        .collect()
}

pub fn naive_dual(log: &DynamicsLog, t: usize, j: usize) -> Vec<f64> {
    naive_windowed(log, t, j, true)
}

pub fn naive_dyn_unc(log: &DynamicsLog, t: usize, j: usize) -> Vec<f64> {
    naive_windowed(log, t, j, false)
}

/// Average ranks by counting smaller and equal elements.
pub fn naive_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let less = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn naive_spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (naive_ranks(a), naive_ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va.sqrt() * vb.sqrt())
}

pub fn naive_stability(tables: &[Vec<f64>]) -> f64 {
    let n = tables[0].len();
    let mean: Vec<f64> = (0..n)
        .map(|i| tables.iter().map(|t| t[i]).sum::<f64>() / tables.len() as f64)
        .collect();
    tables.iter().map(|t| naive_spearman(t, &mean)).sum::<f64>() / tables.len() as f64
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
