//! Linear models trained by full-batch gradient descent on exponential loss.
//!
//! The two-point system has `w_0 = 0` and
//!
//! ```text
//! w_{t+1}   = w_t + eta * (exp(-y1_t) x1 + exp(-y2_t) x2)
//! y1_{t+1}  = y1_t + eta * exp(-y1_t) |x1|^2 + eta * exp(-y2_t) <x1, x2>
//! y2_{t+1}  = y2_t + eta * exp(-y2_t) |x2|^2 + eta * exp(-y1_t) <x1, x2>
//! ```
//!
//! Point 2 (far from the origin) is fit first; point 1 (the max-margin
//! support) catches up later. The derived series track when the window
//! variance of `sigmoid(y)` (and variance times `1 - mean`) of point 1
//! overtakes that of point 2.
//!
//! `sigmoid(y2)` rounds to 1.0 once `y2` passes ~36.7, so every quantity that
//! depends on `sigmoid(y)` is evaluated through `1 - sigmoid(y) = sigmoid(-y)`
//! and log-domain differences. Ratio series (`gamma_V`, `gamma_M`, `zeta`) are
//! still truncated at that saturation point so they match what a direct
//! evaluation could resolve; their lengths are reported by the trajectory.

use std::io::Write;

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dynamics::{DynamicsLog, EpochRecord};
use crate::error::{Error, Result};
use crate::window::{check_window, moments};

pub type Vec2 = [f64; 2];

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: Vec2) -> f64 {
    dot(a, a).sqrt()
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln sigmoid'(z) = ln sigmoid(z) + ln sigmoid(-z)`.
fn ln_sigmoid_prime(z: f64) -> f64 {
    -softplus(-z) - softplus(z)
}

/// `ln(sigmoid(a + d) - sigmoid(a))` for `d > 0`, using
/// `sigmoid(a + d) - sigmoid(a) = expm1(d) * sigmoid(a) * sigmoid(-(a + d))`.
fn ln_sigmoid_step(a: f64, d: f64) -> f64 {
    d.exp_m1().ln() - softplus(-a) - softplus(a + d)
}

/// Inner products of the two inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// `|x1|^2`
    pub n11: f64,
    /// `|x2|^2`
    pub n22: f64,
    /// `<x1, x2>`
    pub n12: f64,
}

impl Geometry {
    pub fn of(x1: Vec2, x2: Vec2) -> Self {
        Self {
            n11: dot(x1, x1),
            n22: dot(x2, x2),
            n12: dot(x1, x2),
        }
    }

    /// Limit of the one-step output ratio: `|x1|^2 / <x1, x2>`.
    pub fn ratio_limit(&self) -> f64 {
        self.n11 / self.n12
    }

    /// First one-step output ratio: `(|x1|^2 + <x1,x2>) / (<x1,x2> + |x2|^2)`.
    pub fn initial_ratio(&self) -> f64 {
        (self.n11 + self.n12) / (self.n12 + self.n22)
    }

    /// One-step output ratio `(y1_{t+1} - y1_t) / (y2_{t+1} - y2_t)` as a
    /// function of the output gap `y2_t - y1_t`.
    pub fn step_ratio(&self, gap: f64) -> f64 {
        let e = (-gap).exp();
        (self.n11 + e * self.n12) / (self.n12 + e * self.n22)
    }

    /// Largest learning rate for which `R * exp(y2_1 - y2_0) < 1`, i.e.
    /// `ln(1 / R) / (|x2|^2 + <x1, x2>)`.
    pub fn learning_rate_bound(&self) -> f64 {
        (1.0 / self.ratio_limit()).ln() / (self.n22 + self.n12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointConfig {
    pub x1: Vec2,
    pub x2: Vec2,
    pub eta: f64,
    /// Number of gradient steps; the trajectory holds `t_max + 1` states.
    pub t_max: usize,
    pub j: usize,
}

impl TwoPointConfig {
    /// `x1 = (0.1, 0.1)`, `x2 = (10, 5)`, `eta = 0.01`, `J = 10`.
    pub fn reference() -> Self {
        Self::reference_with_eta(0.01)
    }

    /// Reference points at another learning rate. The horizon scales as
    /// `30 / eta`, which runs just past the step where `sigmoid(y2)` saturates.
    pub fn reference_with_eta(eta: f64) -> Self {
        Self {
            x1: [0.1, 0.1],
            x2: [10.0, 5.0],
            eta,
            t_max: default_horizon(eta),
            j: 10,
        }
    }

    /// Same dynamics with the two points' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x1: self.x2,
            x2: self.x1,
            ..*self
        }
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::of(self.x1, self.x2)
    }

    /// `|x2| > 1`, `4|x1|^2 < 2<x1,x2> < |x2|^2` and `<x1,x2> < |x1||x2|`.
    pub fn check_assumption(&self) -> Result<()> {
        let g = self.geometry();
        if !(norm(self.x2) > 1.0) {
            return Err(Error::Assumption(format!(
                "|x2| = {} must exceed 1",
                norm(self.x2)
            )));
        }
        if !(4.0 * g.n11 < 2.0 * g.n12) {
            return Err(Error::Assumption(format!(
                "need 4|x1|^2 < 2<x1,x2>, got {} >= {}",
                4.0 * g.n11,
                2.0 * g.n12
            )));
        }
        if !(2.0 * g.n12 < g.n22) {
            return Err(Error::Assumption(format!(
                "need 2<x1,x2> < |x2|^2, got {} >= {}",
                2.0 * g.n12,
                g.n22
            )));
        }
        // relative slack so exactly parallel inputs are not let through by rounding
        if !(g.n12 < norm(self.x1) * norm(self.x2) * (1.0 - 1e-12)) {
            return Err(Error::Assumption("x1 and x2 must not be parallel".into()));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return Err(Error::Validation(format!(
                "learning rate must be non-negative, got {}",
                self.eta
            )));
        }
        if self.t_max == 0 {
            return Err(Error::Validation("t_max must be positive".into()));
        }
        check_window(self.t_max + 1, self.j)
    }
}

pub fn default_horizon(eta: f64) -> usize {
    (30.0 / eta).ceil().max(100.0) as usize
}

/// Window statistics of `sigmoid(y)` for both points; index `t` covers
/// states `t..t + J`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowSeries {
    pub j: usize,
    pub v1: Vec<f64>,
    pub v2: Vec<f64>,
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    /// `1 - mu`, computed from `sigmoid(-y)` so it survives saturation.
    pub one_minus_mu1: Vec<f64>,
    pub one_minus_mu2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CrossingTimes {
    /// First window where point 1's variance overtakes point 2's.
    pub t_v: Option<usize>,
    /// Same for variance times `1 - mean`.
    pub t_vm: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointTrajectory {
    pub config: TwoPointConfig,
    /// `w_0 ..= w_{t_max}`
    pub w: Vec<Vec2>,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    /// Exact increments `y_{t+1} - y_t` from the update rule, length `t_max`.
    pub step1: Vec<f64>,
    pub step2: Vec<f64>,
    pub sig1: Vec<f64>,
    pub sig2: Vec<f64>,
    /// `1 - sigmoid(y) = sigmoid(-y)`
    pub comp1: Vec<f64>,
    pub comp2: Vec<f64>,
    /// `y2_t - y1_t`
    pub dy: Vec<f64>,
    /// One-step output ratio `step1 / step2`, length `t_max`.
    pub step_ratio: Vec<f64>,
    pub gamma_v: Vec<f64>,
    pub gamma_m: Vec<f64>,
    pub zeta1: Vec<f64>,
    pub zeta2: Vec<f64>,
    pub dzeta: Vec<f64>,
    pub windows: WindowSeries,
    pub crossing: CrossingTimes,
    /// First `t` with `sigmoid(y2_t) == 1.0` in f64, if reached.
    pub saturation: Option<usize>,
}

impl TwoPointTrajectory {
    pub fn len(&self) -> usize {
        self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y1.is_empty()
    }

    /// Angle in radians between `w_t` and `x1`; zero for `w_t = 0`.
    pub fn angle_to_x1(&self, t: usize) -> f64 {
        let w = self.w[t];
        let nw = norm(w);
        if nw == 0.0 {
            return 0.0;
        }
        (dot(w, self.config.x1) / (nw * norm(self.config.x1)))
            .clamp(-1.0, 1.0)
            .acos()
    }

    /// Writes `t,y1,y2,sig1,sig2,dy,gammaV,gammaM,zeta1,zeta2,dzeta,V1,V2,mu1,mu2`,
    /// leaving cells empty past the end of shorter series.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "t", "y1", "y2", "sig1", "sig2", "dy", "gammaV", "gammaM", "zeta1", "zeta2", "dzeta",
            "V1", "V2", "mu1", "mu2",
        ])?;
        let cell = |v: &[f64], t: usize| v.get(t).map(|x| x.to_string()).unwrap_or_default();
        let ws = &self.windows;
        for t in 0..self.len() {
            wtr.write_record([
                t.to_string(),
                cell(&self.y1, t),
                cell(&self.y2, t),
                cell(&self.sig1, t),
                cell(&self.sig2, t),
                cell(&self.dy, t),
                cell(&self.gamma_v, t),
                cell(&self.gamma_m, t),
                cell(&self.zeta1, t),
                cell(&self.zeta2, t),
                cell(&self.dzeta, t),
                cell(&ws.v1, t),
                cell(&ws.v2, t),
                cell(&ws.mu1, t),
                cell(&ws.mu2, t),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Weight trajectory `t,w1,w2` for plotting how `w` turns from `x2` to `x1`.
    pub fn write_weights_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["t", "w1", "w2"])?;
        for (t, wt) in self.w.iter().enumerate() {
            wtr.write_record([t.to_string(), wt[0].to_string(), wt[1].to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Checks the geometric assumption, then runs the dynamics.
pub fn simulate_two_point(config: &TwoPointConfig) -> Result<TwoPointTrajectory> {
    config.check_assumption()?;
    let bound = config.geometry().learning_rate_bound();
    if config.eta > bound {
        log::warn!(
            "learning rate {} exceeds the small-step bound {:.4}; crossing order is not guaranteed",
            config.eta,
            bound
        );
    }
    simulate_dynamics(config)
}

/// Runs the dynamics without the geometric assumption check.
pub fn simulate_dynamics(config: &TwoPointConfig) -> Result<TwoPointTrajectory> {
    config.validate()?;
    let g = config.geometry();
    let eta = config.eta;
    let steps = config.t_max;

    let mut w = Vec::with_capacity(steps + 1);
    let mut y1 = Vec::with_capacity(steps + 1);
    let mut y2 = Vec::with_capacity(steps + 1);
    let mut step1 = Vec::with_capacity(steps);
    let mut step2 = Vec::with_capacity(steps);
    let (mut wt, mut a, mut b) = ([0.0, 0.0], 0.0f64, 0.0f64);
    w.push(wt);
    y1.push(a);
    y2.push(b);
    for _ in 0..steps {
        let (e1, e2) = ((-a).exp(), (-b).exp());
        for (k, wk) in wt.iter_mut().enumerate() {
            *wk += eta * (e1 * config.x1[k] + e2 * config.x2[k]);
        }
        let d1 = eta * e1 * g.n11 + eta * e2 * g.n12;
        let d2 = eta * e2 * g.n22 + eta * e1 * g.n12;
        a += d1;
        b += d2;
        w.push(wt);
        y1.push(a);
        y2.push(b);
        step1.push(d1);
        step2.push(d2);
    }

    let sig1: Vec<f64> = y1.iter().map(|&y| sigmoid(y)).collect();
    let sig2: Vec<f64> = y2.iter().map(|&y| sigmoid(y)).collect();
    let comp1: Vec<f64> = y1.iter().map(|&y| sigmoid(-y)).collect();
    let comp2: Vec<f64> = y2.iter().map(|&y| sigmoid(-y)).collect();
    let dy: Vec<f64> = y1.iter().zip(&y2).map(|(p, q)| q - p).collect();
    let step_ratio = dy[..steps].iter().map(|&gap| g.step_ratio(gap)).collect();
    let saturation = sig2.iter().position(|&s| s >= 1.0);

    let mut traj = TwoPointTrajectory {
        config: *config,
        w,
        y1,
        y2,
        step1,
        step2,
        sig1,
        sig2,
        comp1,
        comp2,
        dy,
        step_ratio,
        gamma_v: Vec::new(),
        gamma_m: Vec::new(),
        zeta1: Vec::new(),
        zeta2: Vec::new(),
        dzeta: Vec::new(),
        windows: WindowSeries::default(),
        crossing: CrossingTimes::default(),
        saturation,
    };
    if eta > 0.0 {
        let (gv, gm) = gamma_series(&traj);
        traj.gamma_v = gv;
        traj.gamma_m = gm;
        let (z1, z2, dz) = zeta_series(&traj)?;
        traj.zeta1 = z1;
        traj.zeta2 = z2;
        traj.dzeta = dz;
    }
    traj.windows = window_stats(&traj, config.j)?;
    traj.crossing = crossing_times(&traj, config.j)?;
    Ok(traj)
}

/// Number of one-step indices `t` (needing `t + 1`) before saturation.
fn step_prefix(traj: &TwoPointTrajectory) -> usize {
    let steps = traj.len() - 1;
    match traj.saturation {
        Some(s) => s.saturating_sub(1).min(steps),
        None => steps,
    }
}

/// Window variance and mean of `sigmoid(y)` for both points.
pub fn window_stats(traj: &TwoPointTrajectory, j: usize) -> Result<WindowSeries> {
    check_window(traj.len(), j)?;
    // variance is invariant under x -> 1 - x, so work on the complements
    let m1: Vec<_> = traj.comp1.windows(j).map(moments).collect();
    let m2: Vec<_> = traj.comp2.windows(j).map(moments).collect();
    Ok(WindowSeries {
        j,
        v1: m1.iter().map(|m| m.variance).collect(),
        v2: m2.iter().map(|m| m.variance).collect(),
        mu1: m1.iter().map(|m| 1.0 - m.mean).collect(),
        mu2: m2.iter().map(|m| 1.0 - m.mean).collect(),
        one_minus_mu1: m1.iter().map(|m| m.mean).collect(),
        one_minus_mu2: m2.iter().map(|m| m.mean).collect(),
    })
}

fn first_crossing(holds: impl Fn(usize) -> bool, len: usize) -> Option<usize> {
    // a crossing needs the order to actually flip: if point 1 already leads
    // in the first window there is nothing to overtake
    (1..len).find(|&t| holds(t) && !holds(t - 1))
}

/// First window index at which point 1 overtakes point 2, for the plain
/// variance (`t_v`) and the variance weighted by `1 - mean` (`t_vm`).
pub fn crossing_times(traj: &TwoPointTrajectory, j: usize) -> Result<CrossingTimes> {
    let ws = if traj.windows.j == j && !traj.windows.v1.is_empty() {
        traj.windows.clone()
    } else {
        window_stats(traj, j)?
    };
    let len = ws.v1.len();
    let t_v = first_crossing(|t| ws.v1[t] > ws.v2[t], len);
    let t_vm = first_crossing(
        |t| ws.v1[t] * ws.one_minus_mu1[t] > ws.v2[t] * ws.one_minus_mu2[t],
        len,
    );
    Ok(CrossingTimes { t_v, t_vm })
}

/// `gamma_V(t)` (ratio of one-step `sigmoid` increments) and
/// `gamma_M(t) = (1 + e^{y2}) / (1 + e^{y1})`, truncated where `sigmoid(y2)`
/// saturates.
pub fn gamma_series(traj: &TwoPointTrajectory) -> (Vec<f64>, Vec<f64>) {
    let steps = step_prefix(traj);
    let gamma_v = (0..steps)
        .map(|t| {
            let l1 = ln_sigmoid_step(traj.y1[t], traj.step1[t]);
            let l2 = ln_sigmoid_step(traj.y2[t], traj.step2[t]);
            (l1 - l2).exp()
        })
        .collect();
    let states = traj.saturation.unwrap_or(traj.len());
    let gamma_m = (0..states)
        .map(|t| (softplus(traj.y2[t]) - softplus(traj.y1[t])).exp())
        .collect();
    (gamma_v, gamma_m)
}

const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

/// Solves `sigmoid(lo + d) - sigmoid(lo) = d * sigmoid'(zeta)` for `zeta` in
/// `[lo, lo + d]`, `lo >= 0`, where `sigmoid'` is strictly decreasing.
pub fn mean_value_point(lo: f64, d: f64) -> Result<f64> {
    let target = ln_sigmoid_step(lo, d) - d.ln();
    let f = |z: f64| ln_sigmoid_prime(z) - target;
    let (mut a, mut b) = (lo, lo + d);
    let (fa, fb) = (f(a), f(b));
    if !(fa >= 0.0 && fb <= 0.0) {
        return Err(Error::Numerical(format!(
            "mean-value point not bracketed on [{a}, {b}]: f(a)={fa:e}, f(b)={fb:e}"
        )));
    }
    for _ in 0..BISECTION_MAX_ITER {
        if b - a <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) >= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Mean-value points of both outputs and their gap `zeta2 - zeta1`.
pub fn zeta_series(traj: &TwoPointTrajectory) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let steps = step_prefix(traj);
    let mut z1 = Vec::with_capacity(steps);
    let mut z2 = Vec::with_capacity(steps);
    for t in 0..steps {
        z1.push(mean_value_point(traj.y1[t], traj.step1[t])?);
        z2.push(mean_value_point(traj.y2[t], traj.step2[t])?);
    }
    let dz = z1.iter().zip(&z2).map(|(a, b)| b - a).collect();
    Ok((z1, z2, dz))
}

/// A 2-D input with a `+1`/`-1` label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPoint {
    pub x: Vec2,
    pub label: i8,
}

/// Per-epoch margins `label * <w_t, x>` for `t = 1..=t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRun {
    pub w: Vec<Vec2>,
    /// `margins[t - 1][i]`
    pub margins: Vec<Vec<f64>>,
}

/// Full-batch gradient descent on the summed exponential loss, from `w = 0`.
pub fn train_linear(points: &[LabeledPoint], eta: f64, t_max: usize) -> LinearRun {
    let mut w = [0.0, 0.0];
    let mut ws = vec![w];
    let mut margins = Vec::with_capacity(t_max);
    let margin = |w: Vec2, p: &LabeledPoint| f64::from(p.label) * dot(w, p.x);
    for _ in 0..t_max {
        let mut grad = [0.0, 0.0];
        for p in points {
            let coef = f64::from(p.label) * (-margin(w, p)).exp();
            grad[0] += coef * p.x[0];
            grad[1] += coef * p.x[1];
        }
        w[0] += eta * grad[0];
        w[1] += eta * grad[1];
        ws.push(w);
        margins.push(points.iter().map(|p| margin(w, p)).collect());
    }
    LinearRun { w: ws, margins }
}

/// Whether some `w` through the origin classifies every point correctly
/// (perceptron, bounded number of passes).
pub fn is_linearly_separable(points: &[LabeledPoint]) -> bool {
    let mut w = [0.0, 0.0];
    for _ in 0..1000 {
        let mut clean = true;
        for p in points {
            let y = f64::from(p.label);
            if y * dot(w, p.x) <= 0.0 {
                w[0] += y * p.x[0];
                w[1] += y * p.x[1];
                clean = false;
            }
        }
        if clean {
            return true;
        }
    }
    false
}

fn binary_entropy_from_margin(m: f64) -> f64 {
    // H = softplus(-m) * sigmoid(m) + softplus(m) * sigmoid(-m)
    let h = softplus(-m) * sigmoid(m) + softplus(m) * sigmoid(-m);
    h.max(0.0)
}

fn record_from_margin(m: f64) -> EpochRecord {
    let p = sigmoid(m);
    let q = sigmoid(-m);
    EpochRecord {
        p_target: p as f32,
        p_runner_up: q as f32,
        el2n: (std::f64::consts::SQRT_2 * q) as f32,
        entropy: binary_entropy_from_margin(m) as f32,
        correct: p > 0.5,
    }
}

/// Trains on `points` after flipping `round(flip_fraction * n)` labels chosen
/// by `seed`, recording epochs `1..=t_max` (epoch `t` is the state after `t`
/// steps). Labels are stored as `1` for `+1` and `0` for `-1`, after flips.
pub fn generate_linear_log(
    points: &[LabeledPoint],
    flip_fraction: f64,
    eta: f64,
    t_max: usize,
    seed: u64,
) -> Result<DynamicsLog> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Shape(format!("need at least two points, got {n}")));
    }
    if t_max < 2 {
        return Err(Error::Range(format!(
            "t_max must be at least 2, got {t_max}"
        )));
    }
    if !(0.0..1.0).contains(&flip_fraction) {
        return Err(Error::Range(format!(
            "flip fraction {flip_fraction} outside [0, 1)"
        )));
    }
    if points.iter().any(|p| p.label != 1 && p.label != -1) {
        return Err(Error::Validation("labels must be +1 or -1".into()));
    }
    if !is_linearly_separable(points) {
        log::warn!("input points are not linearly separable before label flips");
    }
    let flips = (flip_fraction * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise_flags = vec![false; n];
    for i in sample_indices(&mut rng, n, flips) {
        noise_flags[i] = true;
    }
    let observed: Vec<LabeledPoint> = points
        .iter()
        .zip(&noise_flags)
        .map(|(p, &f)| LabeledPoint {
            x: p.x,
            label: if f { -p.label } else { p.label },
        })
        .collect();
    let run = train_linear(&observed, eta, t_max);
    if run.margins.iter().flatten().any(|m| !m.is_finite()) {
        return Err(Error::Numerical(format!(
            "gradient descent diverged at eta={eta}"
        )));
    }
    let mut records = Vec::with_capacity(n * t_max);
    for i in 0..n {
        for epoch in &run.margins {
            records.push(record_from_margin(epoch[i]));
        }
    }
    let labels = observed.iter().map(|p| u32::from(p.label > 0)).collect();
    DynamicsLog::new(n, t_max, records, Some(labels), Some(noise_flags))
}

/// `n` points split evenly between isotropic Gaussians at `+center` (label
/// `+1`) and `-center` (label `-1`).
pub fn two_gaussians(n: usize, center: Vec2, std: f64, seed: u64) -> Result<Vec<LabeledPoint>> {
    let normal = Normal::new(0.0, std).map_err(|e| Error::Validation(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            let x = [
                s * center[0] + normal.sample(&mut rng),
                s * center[1] + normal.sample(&mut rng),
            ];
            LabeledPoint { x, label: s as i8 }
        })
        .collect())
}
