use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    apply_decisions, asynchronous_pass, run_to_fixed_point, synchronous_decisions, ModelKind,
    ModelSpec, NetworkState, Scheduler, UpdateDecision, UpdateOrder,
};
use crate::error::{Error, Result};
use crate::expsum::Sign;
use crate::pattern::{corrupt_in_ball, corrupt_on_sphere, generate_patterns, Pattern, PatternStore};
use crate::seed::SeedSpec;

/// Default pass cap for [`TrialScheduler::ToFixedPoint`].
pub const DEFAULT_MAX_PASSES: usize = 100;

fn default_max_passes() -> usize {
    DEFAULT_MAX_PASSES
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialScheduler {
    /// Every neuron decided once from the corrupted input.
    #[default]
    SyncOneStep,
    AsyncOnePass,
    /// Asynchronous passes until nothing flips.
    ToFixedPoint {
        #[serde(default = "default_max_passes")]
        max_passes: usize,
    },
}

impl fmt::Display for TrialScheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialScheduler::SyncOneStep => f.write_str("sync_one_step"),
            TrialScheduler::AsyncOnePass => f.write_str("async_one_pass"),
            TrialScheduler::ToFixedPoint { max_passes } => write!(f, "to_fixed_point:{max_passes}"),
        }
    }
}

/// Neuron order for asynchronous schedulers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsyncOrder {
    #[default]
    Sequential,
    /// A fresh seeded permutation per pass.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    FixedPattern(usize),
    AllPatterns,
}

impl Default for Target {
    fn default() -> Self {
        Target::FixedPattern(0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    /// Exactly `n_flips` bits flipped.
    #[default]
    Sphere,
    /// Uniform over configurations within `n_flips` bits.
    Ball,
}

/// Seed of one trial. All of a trial's random streams derive from it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialSeed {
    pub master_seed: u64,
    pub trial: u64,
}

impl TrialSeed {
    pub fn new(master_seed: u64, trial: u64) -> Self {
        Self { master_seed, trial }
    }

    pub fn patterns(&self) -> SeedSpec {
        SeedSpec::new(self.master_seed, "patterns", self.trial)
    }

    pub fn corruption(&self, mu: usize) -> SeedSpec {
        let base = SeedSpec::new(self.master_seed, "corruption", self.trial).derived_seed();
        SeedSpec::new(base, "corruption-target", mu as u64)
    }

    pub fn order(&self, mu: usize) -> SeedSpec {
        let base = SeedSpec::new(self.master_seed, "order", self.trial).derived_seed();
        SeedSpec::new(base, "order-target", mu as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TrialSpec {
    pub model: ModelSpec,
    pub n_neurons: usize,
    pub n_patterns: usize,
    pub n_flips: usize,
    pub scheduler: TrialScheduler,
    pub order: AsyncOrder,
    pub target: Target,
    pub corruption: Corruption,
    pub seed: TrialSeed,
}

impl TrialSpec {
    /// Sphere corruption of pattern 0, one synchronous step.
    pub fn new(model: ModelSpec, n_neurons: usize, n_patterns: usize, n_flips: usize, seed: TrialSeed) -> Self {
        Self {
            model,
            n_neurons,
            n_patterns,
            n_flips,
            scheduler: TrialScheduler::SyncOneStep,
            order: AsyncOrder::Sequential,
            target: Target::FixedPattern(0),
            corruption: Corruption::Sphere,
            seed,
        }
    }

    pub fn with_scheduler(self, scheduler: TrialScheduler) -> Self {
        Self { scheduler, ..self }
    }

    pub fn with_target(self, target: Target) -> Self {
        Self { target, ..self }
    }

    pub fn with_order(self, order: AsyncOrder) -> Self {
        Self { order, ..self }
    }

    pub fn with_corruption(self, corruption: Corruption) -> Self {
        Self { corruption, ..self }
    }

    pub fn with_seed(self, seed: TrialSeed) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validated()?;
        if self.n_neurons == 0 {
            return Err(Error::EmptyPattern);
        }
        if self.n_patterns == 0 {
            return Err(Error::EmptyStore);
        }
        if self.n_flips > self.n_neurons {
            return Err(Error::TooManyFlips {
                what: "n_flips",
                value: self.n_flips,
                n_neurons: self.n_neurons,
            });
        }
        if let Target::FixedPattern(index) = self.target {
            if index >= self.n_patterns {
                return Err(Error::PatternOutOfRange {
                    index,
                    n_patterns: self.n_patterns,
                });
            }
        }
        if self.scheduler == (TrialScheduler::ToFixedPoint { max_passes: 0 }) {
            return Err(Error::InvalidArgument("max_passes must be at least 1".into()));
        }
        Ok(())
    }

    /// `ln(M - 1) / N`, the load exponent with `M = e^{αN} + 1`.
    pub fn alpha(&self) -> f64 {
        ((self.n_patterns as f64) - 1.0).ln() / self.n_neurons as f64
    }

    pub fn rho(&self) -> f64 {
        self.n_flips as f64 / self.n_neurons as f64
    }

    fn targets(&self) -> std::ops::Range<usize> {
        match self.target {
            Target::FixedPattern(k) => k..k + 1,
            Target::AllPatterns => 0..self.n_patterns,
        }
    }

    fn corrupt(&self, pattern: &Pattern, mu: usize) -> Result<Pattern> {
        let seed = self.seed.corruption(mu);
        match self.corruption {
            Corruption::Sphere => corrupt_on_sphere(pattern, self.n_flips, seed),
            Corruption::Ball => corrupt_in_ball(pattern, self.n_flips, seed),
        }
    }
}

/// Outcome of one trial.
///
/// Equality ignores `wall_time`, so repeated runs compare equal.
#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    /// Every target recovered bit-exactly.
    pub success: bool,
    /// Summed over targets.
    pub n_wrong_bits_after: usize,
    /// `N` times the number of targets.
    pub bits_checked: usize,
    pub ties_seen: u64,
    /// Exponential model: `ln |E_signal|` and `ln |E_noise|` at the
    /// first-step decision with the largest noise-to-signal ratio.
    pub signal_magnitude_log: Option<f64>,
    pub noise_magnitude_log: Option<f64>,
    /// Exponential model: first-step decisions with `|E_noise| ≥ |E_signal|`.
    pub noise_dominated_neurons: usize,
    /// One-step exponential runs: neurons that ended wrong although the
    /// signal dominated. Always zero for a correct implementation.
    pub audit_violations: usize,
    #[serde(serialize_with = "serialize_duration")]
    pub wall_time: Duration,
}

fn serialize_duration<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl PartialEq for TrialResult {
    fn eq(&self, other: &Self) -> bool {
        self.success == other.success
            && self.n_wrong_bits_after == other.n_wrong_bits_after
            && self.bits_checked == other.bits_checked
            && self.ties_seen == other.ties_seen
            && self.signal_magnitude_log.map(f64::to_bits) == other.signal_magnitude_log.map(f64::to_bits)
            && self.noise_magnitude_log.map(f64::to_bits) == other.noise_magnitude_log.map(f64::to_bits)
            && self.noise_dominated_neurons == other.noise_dominated_neurons
            && self.audit_violations == other.audit_violations
    }
}

impl TrialResult {
    pub fn residual_fraction(&self) -> f64 {
        self.n_wrong_bits_after as f64 / self.bits_checked as f64
    }
}

#[derive(Default)]
struct Diagnostics {
    worst: Option<(f64, f64)>,
    noise_dominated: usize,
    violations: usize,
}

impl Diagnostics {
    fn record(&mut self, decisions: &[UpdateDecision], target: &Pattern, audit: bool) {
        for d in decisions {
            if d.noise_dominates {
                self.noise_dominated += 1;
            }
            if audit && d.new_value != target.spin(d.neuron) && !d.noise_dominates {
                self.violations += 1;
            }
            let (s, n) = (d.signal.log_abs, d.noise.log_abs);
            let ratio = n - s;
            if self.worst.is_none_or(|(ws, wn)| ratio > wn - ws) {
                self.worst = Some((s, n));
            }
        }
    }
}

fn run_target(spec: &TrialSpec, store: &PatternStore, mu: usize, diag: &mut Diagnostics) -> Result<(usize, u64)> {
    let target = &store.patterns()[mu];
    let mut state = NetworkState::new(store, spec.corrupt(target, mu)?)?;
    state.set_reference(Some(mu))?;
    let exponential = spec.model.kind == ModelKind::Exponential;
    let order = match spec.order {
        AsyncOrder::Sequential => UpdateOrder::Sequential,
        AsyncOrder::Random => UpdateOrder::RandomPermutation(spec.seed.order(mu)),
    };
    match spec.scheduler {
        TrialScheduler::SyncOneStep => {
            let decisions = synchronous_decisions(&state, &spec.model)?;
            if exponential {
                diag.record(&decisions, target, true);
            }
            apply_decisions(&mut state, &decisions)?;
        }
        TrialScheduler::AsyncOnePass | TrialScheduler::ToFixedPoint { .. } => {
            if exponential {
                diag.record(&synchronous_decisions(&state, &spec.model)?, target, false);
            }
            if let TrialScheduler::ToFixedPoint { max_passes } = spec.scheduler {
                run_to_fixed_point(&mut state, &spec.model, Scheduler::Asynchronous(order), max_passes)?;
            } else {
                asynchronous_pass(&mut state, &spec.model, order)?;
            }
        }
    }
    Ok((state.sigma().hamming(target)?, state.tie_count()))
}

/// Generates the store, corrupts each target, runs the scheduler and
/// compares the result bit-exactly with the uncorrupted target.
pub fn run_trial(spec: &TrialSpec) -> Result<TrialResult> {
    spec.validate()?;
    let start = Instant::now();
    let store = generate_patterns(spec.n_neurons, spec.n_patterns, spec.seed.patterns())?;
    let mut diag = Diagnostics::default();
    let mut wrong = 0;
    let mut ties = 0;
    let targets = spec.targets();
    let n_targets = targets.len();
    for mu in targets {
        let (w, t) = run_target(spec, &store, mu, &mut diag)?;
        wrong += w;
        ties += t;
    }
    Ok(TrialResult {
        success: wrong == 0,
        n_wrong_bits_after: wrong,
        bits_checked: spec.n_neurons * n_targets,
        ties_seen: ties,
        signal_magnitude_log: diag.worst.map(|w| w.0),
        noise_magnitude_log: diag.worst.map(|w| w.1),
        noise_dominated_neurons: diag.noise_dominated,
        audit_violations: diag.violations,
        wall_time: start.elapsed(),
    })
}

/// Signal and noise magnitudes of `Δ_iE` for one target and neuron, taken
/// at the corrupted input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalNoiseRecord {
    pub pattern: usize,
    pub neuron: usize,
    pub log_signal: f64,
    /// `-inf` when the noise sum is exactly zero.
    pub log_noise: f64,
    pub noise_dominates: bool,
    /// `ln |E_signal| ≥ N(1 - 2ρ) + ln(1 - e^{-2})`.
    pub signal_bound_holds: bool,
}

/// `N(1 - 2ρ) + ln(1 - e^{-2})` with `ρN = n_flips`.
pub fn signal_lower_bound(n_neurons: usize, n_flips: usize) -> f64 {
    (n_neurons as f64 - 2.0 * n_flips as f64) + (-(-2.0f64).exp()).ln_1p()
}

/// Per-neuron signal/noise decomposition for every target of `spec`.
pub fn signal_noise_profile(spec: &TrialSpec) -> Result<Vec<SignalNoiseRecord>> {
    if spec.model.kind != ModelKind::Exponential {
        return Err(Error::UnsupportedModel("signal/noise profiles need the exponential model"));
    }
    spec.validate()?;
    let store = generate_patterns(spec.n_neurons, spec.n_patterns, spec.seed.patterns())?;
    let bound = signal_lower_bound(spec.n_neurons, spec.n_flips) - 1e-9;
    let mut out = Vec::with_capacity(spec.n_neurons * spec.targets().len());
    for mu in spec.targets() {
        let target = &store.patterns()[mu];
        let start = spec.corrupt(target, mu)?;
        let mut state = NetworkState::new(&store, start)?;
        state.set_reference(Some(mu))?;
        for d in synchronous_decisions(&state, &spec.model)? {
            let log_noise = if d.noise.sign == Sign::Zero {
                f64::NEG_INFINITY
            } else {
                d.noise.log_abs
            };
            out.push(SignalNoiseRecord {
                pattern: mu,
                neuron: d.neuron,
                log_signal: d.signal.log_abs,
                log_noise,
                noise_dominates: d.noise_dominates,
                signal_bound_holds: d.signal.log_abs >= bound,
            });
        }
    }
    Ok(out)
}
