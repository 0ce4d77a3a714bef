//! Training-dynamics example scoring and coreset selection.
//!
//! * [`dynamics`]: per-sample prediction logs and the `DYNL` / CSV formats.
//! * [`scores`]: DUAL, Dyn-Unc and baseline scores over a log.
//! * [`sampler`]: pruning-ratio-adaptive Beta weights and seeded sampling.
//! * [`coreset`]: selection pipeline, manifests and evaluation reports.
//! * [`synthetic`]: gradient descent on linear models, including the
//!   two-point system used by [`theory`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coreset;
pub mod dynamics;
pub mod error;
pub mod rank;
pub mod sampler;
pub mod scores;
pub mod synthetic;
pub mod theory;
pub mod window;

pub use coreset::{
    moon_export, noise_report, select, select_with_scores, stability_report, CoresetManifest,
    MoonPoint, NoiseReport, PruneConfig, Strategy,
};
pub use dynamics::{read_log, write_log, DynamicsLog, EpochRecord, LogFormat};
pub use error::{Error, Result};
pub use rank::spearman;
pub use sampler::{
    beta_params, beta_pdf, mu_top, sample_without_replacement, sampling_weights, BetaParams,
};
pub use scores::{
    aum_score, dual_score, dyn_unc, el2n_score, entropy_score, forgetting_score,
    windowed_uncertainty, Metric, Preset, ScoreTable,
};
pub use synthetic::{
    crossing_times, gamma_series, generate_linear_log, simulate_two_point, window_stats,
    zeta_series, CrossingTimes, LabeledPoint, TwoPointConfig, TwoPointTrajectory,
};
pub use theory::{verify, TheoryReport};
