//! Empirical checks of the two-point crossing-order result and the
//! supporting monotonicity statements.

use std::fmt;

use crate::error::Result;
use crate::synthetic::{simulate_two_point, TwoPointConfig, TwoPointTrajectory};

/// Slack for "non-decreasing" checks.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Slack for the one-step output ratio bounds.
pub const RATIO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TheoryReport {
    pub trajectory: TwoPointTrajectory,
    pub learning_rate_bound: f64,
    pub checks: Vec<Check>,
}

impl TheoryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn eta_above_bound(&self) -> bool {
        self.trajectory.config.eta > self.learning_rate_bound
    }
}

impl fmt::Display for TheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cfg = &self.trajectory.config;
        let c = self.trajectory.crossing;
        let show = |t: Option<usize>| t.map_or_else(|| "none".to_string(), |t| t.to_string());
        writeln!(
            f,
            "x1={:?} x2={:?} eta={} steps={} J={}",
            cfg.x1, cfg.x2, cfg.eta, cfg.t_max, cfg.j
        )?;
        writeln!(f, "learning-rate bound: {:.6}", self.learning_rate_bound)?;
        writeln!(f, "saturation step: {}", show(self.trajectory.saturation))?;
        writeln!(f, "T_v = {}, T_vm = {}", show(c.t_v), show(c.t_vm))?;
        for check in &self.checks {
            writeln!(
                f,
                "[{}] {}: {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.detail
            )?;
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// First index where `next < prev - tol`, if any.
pub fn first_decrease(series: &[f64], tol: f64) -> Option<usize> {
    series
        .windows(2)
        .position(|w| w[1] < w[0] - tol)
        .map(|k| k + 1)
}

fn monotone_check(name: &'static str, series: &[f64]) -> Check {
    match first_decrease(series, MONOTONE_TOL) {
        None => Check {
            name,
            passed: true,
            detail: format!("non-decreasing over {} values", series.len()),
        },
        Some(t) => Check {
            name,
            passed: false,
            detail: format!("decreases at t={t}: {} -> {}", series[t - 1], series[t]),
        },
    }
}

/// Simulates `config` and runs every check.
pub fn verify(config: &TwoPointConfig) -> Result<TheoryReport> {
    let traj = simulate_two_point(config)?;
    let g = config.geometry();
    let mut checks = Vec::new();

    let c = traj.crossing;
    checks.push(Check {
        name: "crossing order T_vm < T_v",
        passed: matches!((c.t_vm, c.t_v), (Some(vm), Some(v)) if vm < v),
        detail: format!("T_v={:?}, T_vm={:?}", c.t_v, c.t_vm),
    });

    let dy_bad = traj.dy.windows(2).skip(1).position(|w| !(w[1] > w[0]));
    checks.push(Check {
        name: "dy strictly increasing",
        passed: traj.dy[0] == 0.0 && traj.dy.get(1).is_none_or(|&d| d > 0.0) && dy_bad.is_none(),
        detail: match dy_bad {
            None => format!(
                "dy_1={:.6}, dy_end={:.6}",
                traj.dy.get(1).copied().unwrap_or(0.0),
                traj.dy.last().unwrap()
            ),
            Some(k) => format!("fails at t={}", k + 2),
        },
    });

    let overlap = (1..traj.len() - 1).find(|&t| !(traj.y1[t + 1] < traj.y2[t]));
    checks.push(Check {
        name: "y1_{t+1} < y2_t",
        passed: overlap.is_none(),
        detail: overlap.map_or_else(
            || "holds for all t >= 1".into(),
            |t| format!("fails at t={t}"),
        ),
    });

    let (r0, r) = (g.initial_ratio(), g.ratio_limit());
    let out_of_bounds = traj
        .step_ratio
        .iter()
        .position(|&q| q < r0 - RATIO_TOL || q > r + RATIO_TOL);
    let ratio_drop = first_decrease(&traj.step_ratio, RATIO_TOL);
    checks.push(Check {
        name: "step ratio in [R0, R], non-decreasing",
        passed: out_of_bounds.is_none() && ratio_drop.is_none(),
        detail: format!(
            "R0={r0:.9}, R={r:.9}, first={:.9}, last={:.9}",
            traj.step_ratio[0],
            traj.step_ratio.last().unwrap()
        ),
    });

    checks.push(Check {
        name: "gamma_V(0) < 1",
        passed: traj.gamma_v.first().is_some_and(|&g| g < 1.0),
        detail: format!("gamma_V(0)={:?}", traj.gamma_v.first()),
    });
    checks.push(Check {
        name: "gamma_M(0) = 1",
        passed: traj.gamma_m.first() == Some(&1.0),
        detail: format!("gamma_M(0)={:?}", traj.gamma_m.first()),
    });

    let prefix = traj.gamma_v.len();
    checks.push(monotone_check("gamma_V non-decreasing", &traj.gamma_v));
    checks.push(monotone_check("gamma_M non-decreasing", &traj.gamma_m));
    checks.push(monotone_check("dzeta non-decreasing", &traj.dzeta));
    checks.push(monotone_check(
        "dy non-decreasing (prefix)",
        &traj.dy[..traj.gamma_m.len()],
    ));

    let dz_bad = traj.dzeta.iter().position(|&d| !(d > 0.0));
    checks.push(Check {
        name: "dzeta > 0",
        passed: dz_bad.is_none(),
        detail: dz_bad.map_or_else(
            || format!("holds over {prefix} steps"),
            |t| format!("fails at t={t}"),
        ),
    });

    let midpoint_bad = (0..prefix).find(|&t| {
        let near = |z: f64, y: &[f64], d: f64| (z - (y[t] + y[t + 1]) / 2.0).abs() < d / 6.0;
        !(near(traj.zeta1[t], &traj.y1, traj.step1[t])
            && near(traj.zeta2[t], &traj.y2, traj.step2[t]))
    });
    checks.push(Check {
        name: "zeta within step/6 of midpoint",
        passed: midpoint_bad.is_none(),
        detail: midpoint_bad.map_or_else(
            || format!("holds over {prefix} steps"),
            |t| format!("fails at t={t}"),
        ),
    });

    let angles: Vec<f64> = (1..traj.len()).map(|t| traj.angle_to_x1(t)).collect();
    let angle_rise = first_decrease(&angles.iter().map(|a| -a).collect::<Vec<_>>(), 1e-12);
    checks.push(Check {
        name: "w_t turns toward x1",
        passed: angle_rise.is_none() && angles.last() < angles.first(),
        detail: format!(
            "angle(w_1, x1)={:.6} rad, angle(w_T, x1)={:.6} rad",
            angles[0],
            angles.last().unwrap()
        ),
    });

    Ok(TheoryReport {
        trajectory: traj,
        learning_rate_bound: g.learning_rate_bound(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_run_passes_with_golden_crossings() {
        let rep = verify(&TwoPointConfig::reference()).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.trajectory.crossing.t_v, Some(98));
        assert_eq!(rep.trajectory.crossing.t_vm, Some(29));
        assert_eq!(rep.trajectory.saturation, Some(2831));
        assert!(!rep.eta_above_bound());
    }

    #[test]
    fn swapped_roles_violate_assumption() {
        let err = verify(&TwoPointConfig::reference().swapped()).unwrap_err();
        assert!(matches!(err, crate::error::Error::Assumption(_)));
    }

    #[test]
    fn first_decrease_tolerance() {
        assert_eq!(first_decrease(&[1.0, 2.0, 2.0 - 1e-12, 3.0], 1e-10), None);
        assert_eq!(first_decrease(&[1.0, 2.0, 1.5], 1e-10), Some(2));
    }
}
