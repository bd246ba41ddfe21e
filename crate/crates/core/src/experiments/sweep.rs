use std::io::Write;

use serde::Serialize;

use super::executor::Executor;
use super::stats::{wilson_interval, Z_95};
use super::trial::{run_trial, TrialResult, TrialScheduler, TrialSeed, TrialSpec};
use crate::dynamics::ModelKind;
use crate::error::{Error, Result};
use crate::theory::{alpha_star, c_n, polynomial_capacity};

/// Column header of sweep CSV output.
pub const CSV_HEADER: &str = "model,n,N,M,alpha,rho,n_flips,scheduler,trials,successes,wilson_low,wilson_high,mean_residual_fraction,alpha_star,seed";

/// Aggregate over the trials of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub point_index: usize,
    /// Template; its trial index is ignored.
    pub spec: TrialSpec,
    pub alpha: f64,
    pub rho: f64,
    pub n_trials: u64,
    pub n_success: u64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub mean_residual_fraction: f64,
    /// Exponential model with `ρ < 1/2`.
    pub alpha_star: Option<f64>,
    /// Polynomial model with `N ≥ 2`.
    pub polynomial_capacity: Option<f64>,
    pub ties_seen: u64,
    /// Trials with at least one noise-dominated first-step decision.
    pub noise_dominated_trials: u64,
    pub audit_violations: u64,
}

impl SweepResult {
    fn aggregate(point_index: usize, spec: &TrialSpec, trials: &[TrialResult]) -> Result<Self> {
        let n_trials = trials.len() as u64;
        let n_success = trials.iter().filter(|t| t.success).count() as u64;
        let (wilson_low, wilson_high) = wilson_interval(n_success, n_trials, Z_95);
        let residual: f64 = trials.iter().map(TrialResult::residual_fraction).sum::<f64>() / n_trials as f64;
        let rho = spec.rho();
        let alpha_star = match spec.model.kind {
            ModelKind::Exponential if rho < 0.5 => Some(alpha_star(rho)?),
            _ => None,
        };
        let polynomial_capacity = match spec.model.degree() {
            Some(d) if spec.n_neurons >= 2 => Some(polynomial_capacity(spec.n_neurons as f64, d, c_n(d)? as f64)?),
            _ => None,
        };
        Ok(Self {
            point_index,
            spec: *spec,
            alpha: spec.alpha(),
            rho,
            n_trials,
            n_success,
            wilson_low,
            wilson_high,
            mean_residual_fraction: residual,
            alpha_star,
            polynomial_capacity,
            ties_seen: trials.iter().map(|t| t.ties_seen).sum(),
            noise_dominated_trials: trials.iter().filter(|t| t.noise_dominated_neurons > 0).count() as u64,
            audit_violations: trials.iter().map(|t| t.audit_violations as u64).sum(),
        })
    }

    pub fn success_rate(&self) -> f64 {
        self.n_success as f64 / self.n_trials as f64
    }

    /// One CSV line (no newline) matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let s = &self.spec;
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.model.name(),
            opt(s.model.degree().map(|d| d.to_string())),
            s.n_neurons,
            s.n_patterns,
            self.alpha,
            self.rho,
            s.n_flips,
            s.scheduler,
            self.n_trials,
            self.n_success,
            self.wilson_low,
            self.wilson_high,
            self.mean_residual_fraction,
            opt(self.alpha_star.map(|a| a.to_string())),
            s.seed.master_seed,
        )
    }
}

/// Runs `n_trials` trials of every template and yields each point's result
/// to `sink` in grid order.
///
/// Trial `t` of every point uses seed `(master_seed, t)`, so points share
/// pattern draws and corruptions wherever their parameters allow. Output
/// does not depend on `parallelism` (`0` means all cores).
pub fn run_sweep_with<F>(grid: &[TrialSpec], n_trials: u64, parallelism: usize, mut sink: F) -> Result<()>
where
    F: FnMut(&SweepResult) -> Result<()>,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if n_trials == 0 {
        return Err(Error::InvalidArgument("n_trials must be at least 1".into()));
    }
    for spec in grid {
        spec.validate()?;
    }
    let executor = Executor::new(parallelism)?;
    for (index, template) in grid.iter().enumerate() {
        let master = template.seed.master_seed;
        let trials = executor
            .map(n_trials, |t| run_trial(&template.with_seed(TrialSeed::new(master, t))))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        sink(&SweepResult::aggregate(index, template, &trials)?)?;
    }
    Ok(())
}

pub fn run_sweep(grid: &[TrialSpec], n_trials: u64, parallelism: usize) -> Result<Vec<SweepResult>> {
    let mut out = Vec::with_capacity(grid.len());
    run_sweep_with(grid, n_trials, parallelism, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Mean residual error fraction after running to a fixed point.
///
/// Any other scheduler in `spec` is replaced by
/// `ToFixedPoint { max_passes: 100 }`.
pub fn error_fraction_experiment(spec: &TrialSpec, n_trials: u64, parallelism: usize) -> Result<SweepResult> {
    if let ModelKind::Classical { .. } = spec.model.kind {
        return Err(Error::UnsupportedModel("error fractions need the polynomial or exponential model"));
    }
    let spec = match spec.scheduler {
        TrialScheduler::ToFixedPoint { .. } => *spec,
        _ => spec.with_scheduler(TrialScheduler::ToFixedPoint {
            max_passes: super::trial::DEFAULT_MAX_PASSES,
        }),
    };
    run_sweep(&[spec], n_trials, parallelism).map(|mut v| v.remove(0))
}

/// Writes the header and one row per result.
pub fn write_csv<W: Write>(results: &[SweepResult], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in results {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
