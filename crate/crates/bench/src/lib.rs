//! Fixtures shared by the criterion benches.

use dualprune::synthetic::{generate_linear_log, two_gaussians};
use dualprune::DynamicsLog;

/// Noisy two-Gaussian log with `n` samples and `epochs` epochs.
pub fn fixture_log(n: usize, epochs: usize) -> DynamicsLog {
    let points = two_gaussians(n, [2.0, 2.0], 0.5, 7).expect("valid gaussian parameters");
    // summed loss: keep eta * n fixed so every size trains at the same pace
    generate_linear_log(&points, 0.1, 0.2 / n as f64, epochs, 7).expect("fixture log")
}
