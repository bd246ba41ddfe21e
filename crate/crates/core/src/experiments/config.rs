//! JSON sweep configuration. Unknown keys are rejected everywhere.
//!
//! ```json
//! {
//!   "master_seed": 7,
//!   "trials": 500,
//!   "points": [{ "model": {"kind": "exponential"}, "n_neurons": 40, "n_patterns": 25, "n_flips": 5 }],
//!   "grid": {
//!     "models": [{"kind": "polynomial", "degree": 3}],
//!     "n_neurons": [60],
//!     "n_patterns": [73, 1758],
//!     "rho": [0.0]
//!   }
//! }
//! ```
//!
//! Loads are given by exactly one of `n_patterns` (`M`), `alpha`
//! (`M = round(e^{αN}) + 1`) or `alpha_star_fraction` (`α = f · α*(ρ)` with
//! the realized `ρ = n_flips / N`).
//! Corruption is given by exactly one of `n_flips` or `rho`
//! (`n_flips = ⌊ρN⌋`).

use serde::{Deserialize, Serialize};

use super::sweep::CSV_HEADER;
use super::trial::{AsyncOrder, Corruption, Target, TrialScheduler, TrialSeed, TrialSpec};
use crate::dynamics::ModelSpec;
use crate::error::{Error, Result};
use crate::theory::alpha_star;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub model: ModelSpec,
    pub n_neurons: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_patterns: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_star_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_flips: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default)]
    pub scheduler: TrialScheduler,
    #[serde(default)]
    pub order: AsyncOrder,
    #[serde(default)]
    pub target: Target,
    #[serde(default)]
    pub corruption: Corruption,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub models: Vec<ModelSpec>,
    pub n_neurons: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_patterns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_star_fraction: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_flips: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
    #[serde(default)]
    pub scheduler: TrialScheduler,
    #[serde(default)]
    pub order: AsyncOrder,
    #[serde(default)]
    pub target: Target,
    #[serde(default)]
    pub corruption: Corruption,
}

fn default_trials() -> u64 {
    500
}

fn default_parallelism() -> usize {
    0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// `0` uses every core.
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub points: Vec<PointConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
}

/// `M = round(e^{αN}) + 1`.
pub fn patterns_for_alpha(alpha: f64, n_neurons: usize) -> Result<usize> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(invalid(format!("alpha must be a non-negative number, got {alpha}")));
    }
    let m = (alpha * n_neurons as f64).exp().round();
    if m >= (1u64 << 40) as f64 {
        return Err(invalid(format!("alpha = {alpha} at N = {n_neurons} gives more than 2^40 patterns")));
    }
    Ok(m as usize + 1)
}

/// `⌊ρN⌋`, tolerant of representation error just below an integer.
pub fn flips_for_rho(rho: f64, n_neurons: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid(format!("rho must lie in [0, 1], got {rho}")));
    }
    Ok((rho * n_neurons as f64 + 1e-9).floor() as usize)
}

enum Load {
    Patterns(usize),
    Alpha(f64),
    Fraction(f64),
}

enum Flips {
    Count(usize),
    Rho(f64),
}

struct Shape {
    scheduler: TrialScheduler,
    order: AsyncOrder,
    target: Target,
    corruption: Corruption,
}

fn exactly_one<T>(options: [(&'static str, Option<T>); 3], what: &str) -> Result<T> {
    let given: Vec<&str> = options.iter().filter(|o| o.1.is_some()).map(|o| o.0).collect();
    if given.len() != 1 {
        return Err(invalid(format!("{what}: give exactly one of {}", options.map(|o| o.0).join(", "))));
    }
    Ok(options.into_iter().find_map(|o| o.1).expect("one option is set"))
}

fn build(model: ModelSpec, n: usize, load: Load, flips: Flips, shape: &Shape, master: u64) -> Result<TrialSpec> {
    let model = model.validated()?;
    if n == 0 {
        return Err(Error::EmptyPattern);
    }
    let n_flips = match flips {
        Flips::Count(k) => k,
        Flips::Rho(r) => flips_for_rho(r, n)?,
    };
    let rho = n_flips as f64 / n as f64;
    let n_patterns = match load {
        Load::Patterns(m) => m,
        Load::Alpha(a) => patterns_for_alpha(a, n)?,
        Load::Fraction(f) => {
            if !(0.0..0.5).contains(&rho) {
                return Err(invalid("alpha_star_fraction needs rho in [0, 0.5)"));
            }
            patterns_for_alpha(f * alpha_star(rho)?, n)?
        }
    };
    let spec = TrialSpec {
        model,
        n_neurons: n,
        n_patterns,
        n_flips,
        scheduler: shape.scheduler,
        order: shape.order,
        target: shape.target,
        corruption: shape.corruption,
        seed: TrialSeed::new(master, 0),
    };
    spec.validate()?;
    Ok(spec)
}

fn load_of(n_patterns: Option<usize>, alpha: Option<f64>, fraction: Option<f64>) -> Result<Load> {
    exactly_one(
        [
            ("n_patterns", n_patterns.map(Load::Patterns)),
            ("alpha", alpha.map(Load::Alpha)),
            ("alpha_star_fraction", fraction.map(Load::Fraction)),
        ],
        "load",
    )
}

impl PointConfig {
    fn expand(&self, master: u64) -> Result<TrialSpec> {
        let load = load_of(self.n_patterns, self.alpha, self.alpha_star_fraction)?;
        let flips = match (self.n_flips, self.rho) {
            (Some(k), None) => Flips::Count(k),
            (None, Some(r)) => Flips::Rho(r),
            (None, None) => Flips::Count(0),
            _ => return Err(invalid("corruption: give at most one of n_flips, rho")),
        };
        let shape = Shape {
            scheduler: self.scheduler,
            order: self.order,
            target: self.target,
            corruption: self.corruption,
        };
        build(self.model, self.n_neurons, load, flips, &shape, master)
    }
}

impl GridConfig {
    /// Cartesian product in the order model, N, load, corruption (last varies fastest).
    fn expand(&self, master: u64) -> Result<Vec<TrialSpec>> {
        let shape = Shape {
            scheduler: self.scheduler,
            order: self.order,
            target: self.target,
            corruption: self.corruption,
        };
        let loads: Vec<(Option<usize>, Option<f64>, Option<f64>)> = match (
            &self.n_patterns,
            &self.alpha,
            &self.alpha_star_fraction,
        ) {
            (Some(v), None, None) => v.iter().map(|&m| (Some(m), None, None)).collect(),
            (None, Some(v), None) => v.iter().map(|&a| (None, Some(a), None)).collect(),
            (None, None, Some(v)) => v.iter().map(|&f| (None, None, Some(f))).collect(),
            _ => return Err(invalid("grid load: give exactly one of n_patterns, alpha, alpha_star_fraction")),
        };
        let flips: Vec<(Option<usize>, Option<f64>)> = match (&self.n_flips, &self.rho) {
            (Some(v), None) => v.iter().map(|&k| (Some(k), None)).collect(),
            (None, Some(v)) => v.iter().map(|&r| (None, Some(r))).collect(),
            (None, None) => vec![(Some(0), None)],
            _ => return Err(invalid("grid corruption: give at most one of n_flips, rho")),
        };
        let mut out = Vec::new();
        for &model in &self.models {
            for &n in &self.n_neurons {
                for &(m, a, f) in &loads {
                    for &(k, r) in &flips {
                        let flips = match (k, r) {
                            (Some(k), _) => Flips::Count(k),
                            (None, Some(r)) => Flips::Rho(r),
                            (None, None) => Flips::Count(0),
                        };
                        out.push(build(model, n, load_of(m, a, f)?, flips, &shape, master)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        Ok(config)
    }

    /// Explicit points first, then the grid.
    pub fn expand(&self) -> Result<Vec<TrialSpec>> {
        let mut out = self
            .points
            .iter()
            .map(|p| p.expand(self.master_seed))
            .collect::<Result<Vec<_>>>()?;
        if let Some(grid) = &self.grid {
            out.extend(grid.expand(self.master_seed)?);
        }
        if out.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(out)
    }
}

/// Provenance record written next to sweep output.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub csv_header: &'static str,
    pub config: &'a SweepConfig,
    pub points: Vec<TrialSpec>,
}

impl<'a> Manifest<'a> {
    pub fn new(config: &'a SweepConfig) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            csv_header: CSV_HEADER,
            config,
            points: config.expand()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
