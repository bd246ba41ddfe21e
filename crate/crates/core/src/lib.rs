//! Dense associative memories: classical Hopfield, n-spin polynomial and
//! exponential-interaction retrieval dynamics on bit-packed ±1 patterns,
//! closed-form capacity theory, and a deterministic parallel Monte Carlo
//! harness.
//!
//! ```
//! use densemem::dynamics::ModelSpec;
//! use densemem::experiments::{run_trial, TrialSeed, TrialSpec};
//!
//! let spec = TrialSpec::new(ModelSpec::exponential(), 40, 3, 10, TrialSeed::new(1, 0));
//! let result = run_trial(&spec).unwrap();
//! assert_eq!(result.success, result.n_wrong_bits_after == 0);
//! ```

pub mod codec;
pub mod dynamics;
mod error;
pub mod experiments;
pub mod expsum;
pub mod pattern;
pub mod seed;
pub mod theory;

pub use error::{Error, Result};
pub use pattern::{generate_patterns, overlap, Pattern, PatternStore};
pub use seed::SeedSpec;
