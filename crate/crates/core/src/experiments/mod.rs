//! Seeded Monte Carlo harness: single trials, sweeps over grids of trial
//! templates, Wilson intervals and theory overlays.

mod config;
mod executor;
mod stats;
mod sweep;
mod trial;

pub use config::{flips_for_rho, patterns_for_alpha, GridConfig, Manifest, PointConfig, SweepConfig};
pub use stats::{wilson_interval, Z_95};
pub use sweep::{error_fraction_experiment, run_sweep, run_sweep_with, write_csv, SweepResult, CSV_HEADER};
pub use trial::{
    run_trial, signal_lower_bound, signal_noise_profile, AsyncOrder, Corruption, SignalNoiseRecord, Target,
    TrialResult, TrialScheduler, TrialSeed, TrialSpec, DEFAULT_MAX_PASSES,
};
