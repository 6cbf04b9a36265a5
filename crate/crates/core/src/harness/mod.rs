//! Experiment configs, runs, suites and their artifacts.

pub mod config;
pub mod output;
pub mod run;
pub mod suite;
pub mod svg;

use serde::{Deserialize, Serialize};

pub use config::{load_config, parse_config, ExperimentConfig, InitialSpec};
pub use run::{run_experiment, RunReport, Verdict, VerdictStatus};
pub use suite::{default_m_grid, run_suite, SuiteOptions, SuiteReport};

/// Verdict thresholds shared by reports and the acceptance suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Relative error of fitted tail rates.
    pub decay_rel_err: f64,
    /// Cap on `max_t N(t)/N(0)`.
    pub n_ratio_cap: f64,
    /// Required `sup_error(t_end) / sup_error(0)`.
    pub sup_error_ratio: f64,
    /// Cumulative clipped mass relative to the initial mass.
    pub clip_mass_rel: f64,
    /// Profile-initialized runs stay within this multiple of the
    /// representation error.
    pub tracking_factor: f64,
    pub tracking_horizon: f64,
    /// Time at which front slopes are compared across `m`.
    pub steepening_time: f64,
    /// Per-step conservation identity.
    pub mass_identity: f64,
    pub closed_form_rel_err: f64,
    pub profile_oracle: f64,
    pub finite_difference_rel_err: f64,
    pub exact_shift: f64,
    pub shifted_profile: f64,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    decay_rel_err: 0.05,
    n_ratio_cap: 10.0,
    sup_error_ratio: 0.5,
    clip_mass_rel: 1e-8,
    tracking_factor: 5.0,
    tracking_horizon: 5.0,
    steepening_time: 5.0,
    mass_identity: 1e-12,
    closed_form_rel_err: 1e-10,
    profile_oracle: 1e-8,
    finite_difference_rel_err: 1e-4,
    exact_shift: 1e-8,
    shifted_profile: 1e-6,
};
