//! Sliding-window mean and sample variance.
//!
//! Each window is evaluated with a two-pass mean/deviation sum rather than
//! running sums: running sums of squares leave residues around 1e-17 on
//! constant windows, which the square root turns into ~1e-9 spurious spread.

use crate::error::{Error, Result};

/// Mean and Bessel-corrected variance of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMoments {
    pub mean: f64,
    pub variance: f64,
}

impl WindowMoments {
    pub fn std(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Two-pass mean and sample variance (divisor `len - 1`).
pub fn moments(values: &[f64]) -> WindowMoments {
    let len = values.len();
    debug_assert!(len >= 2);
    // shifting by the first value makes constant windows exactly zero
    let pivot = values[0];
    let shift = values.iter().map(|v| v - pivot).sum::<f64>() / len as f64;
    let ss: f64 = values
        .iter()
        .map(|v| {
            let d = v - pivot - shift;
            d * d
        })
        .sum();
    WindowMoments {
        mean: pivot + shift,
        variance: ss / (len - 1) as f64,
    }
}

/// Sample variance via the pairwise-difference identity
/// `Var = 1/(n(n-1)) * sum_{i<j} (x_i - x_j)^2`.
pub fn pairwise_variance(values: &[f64]) -> f64 {
    let len = values.len();
    let mut acc = 0.0;
    for i in 0..len {
        for j in i + 1..len {
            let d = values[i] - values[j];
            acc += d * d;
        }
    }
    acc / (len * (len - 1)) as f64
}

pub fn check_window(len: usize, window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::Window(format!(
            "window length {window} < 2; variance undefined"
        )));
    }
    if window > len {
        return Err(Error::Window(format!(
            "window length {window} exceeds series length {len}"
        )));
    }
    Ok(())
}

/// Moments of every window `series[k..k + window]`, `k = 0..=len - window`.
pub fn sliding_moments(series: &[f64], window: usize) -> Result<Vec<WindowMoments>> {
    check_window(series.len(), window)?;
    Ok(series.windows(window).map(moments).collect())
}

/// Largest possible window standard deviation for values in `[0, 1]`.
pub fn max_unit_std(window: usize) -> f64 {
    0.5 * (window as f64 / (window as f64 - 1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_window_is_exactly_zero() {
        let m = moments(&[0.7; 10]);
        assert_eq!(m.variance, 0.0);
        assert_eq!(m.mean, 0.7);
    }

    #[test]
    fn pairwise_matches_two_pass() {
        let xs = [0.0, 1.0];
        assert_eq!(pairwise_variance(&xs), 0.5);
        let ys = [0.13, 0.77, 0.42, 0.91, 0.05, 0.66];
        assert!((pairwise_variance(&ys) - moments(&ys).variance).abs() < 1e-15);
    }

    #[test]
    fn window_bounds() {
        assert!(matches!(
            sliding_moments(&[0.1, 0.2], 3),
            Err(Error::Window(_))
        ));
        assert!(matches!(
            sliding_moments(&[0.1, 0.2], 1),
            Err(Error::Window(_))
        ));
        assert_eq!(sliding_moments(&[0.1, 0.2, 0.3], 2).unwrap().len(), 2);
    }

    #[test]
    fn alternating_extremes_hit_bound() {
        // [0, 1] with J=2 reaches 0.5 * sqrt(2)
        let m = moments(&[0.0, 1.0]);
        assert!((m.std() - max_unit_std(2)).abs() < 1e-15);
    }
}
