//! Retrieval dynamics: classical sign rule, n-spin polynomial rule and the
//! exponential-interaction rule, plus synchronous/asynchronous schedulers.
//!
//! Every decision is phrased through the sign of `Δ_i`, the energy gain of
//! keeping `σ_i` over flipping it: `Positive` keeps the spin, `Negative`
//! flips it, `Zero` is a tie resolved by [`TiePolicy`]. For the classical and
//! polynomial rules `Δ_i = σ_i h_i` with `h_i` the local field.

mod field;
mod schedule;
mod state;

use serde::{Deserialize, Serialize};

pub use field::{classical_local_field, exp_delta_energy_sign, ln_two_sinh_one, nspin_local_field, WideInt};
pub use schedule::{
    apply_decisions, asynchronous_pass, run_to_fixed_point, synchronous_decisions, synchronous_step,
    FixedPointRun, Scheduler, StopReason, UpdateOrder,
};
pub use state::NetworkState;

use crate::error::{Error, Result};
use crate::expsum::{ExpSum, Sign, SignedLog};

/// Self-coupling convention for the classical rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagonal {
    /// `J_ii = M`, the full Hebbian sum over `j`.
    #[default]
    Hebbian,
    /// `J_ii = 0`; equivalent to the generalized rule with `F(x) = x²`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Classical { diagonal: Diagonal },
    /// n-spin rule with Hebbian tensor of order `degree`.
    Polynomial { degree: u32 },
    /// Generalized rule with `F(x) = e^x`.
    Exponential,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A tie never flips a neuron.
    #[default]
    KeepCurrent,
    PlusOne,
}

/// JSON form: `{"kind": "polynomial", "degree": 3, "tie_policy": "keep_current"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModelSpecRepr", into = "ModelSpecRepr")]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub tie_policy: TiePolicy,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindTag {
    Classical,
    Polynomial,
    Exponential,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpecRepr {
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagonal: Option<Diagonal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    #[serde(default)]
    tie_policy: TiePolicy,
}

impl TryFrom<ModelSpecRepr> for ModelSpec {
    type Error = String;

    fn try_from(r: ModelSpecRepr) -> std::result::Result<Self, String> {
        let kind = match (r.kind, r.diagonal, r.degree) {
            (KindTag::Classical, diagonal, None) => ModelKind::Classical {
                diagonal: diagonal.unwrap_or_default(),
            },
            (KindTag::Polynomial, None, Some(degree)) => ModelKind::Polynomial { degree },
            (KindTag::Polynomial, None, None) => return Err("polynomial model needs `degree`".into()),
            (KindTag::Exponential, None, None) => ModelKind::Exponential,
            (_, Some(_), _) => return Err("`diagonal` applies only to the classical model".into()),
            (_, _, Some(_)) => return Err("`degree` applies only to the polynomial model".into()),
        };
        Self {
            kind,
            tie_policy: r.tie_policy,
        }
        .validated()
        .map_err(|e| e.to_string())
    }
}

impl From<ModelSpec> for ModelSpecRepr {
    fn from(m: ModelSpec) -> Self {
        let (kind, diagonal, degree) = match m.kind {
            ModelKind::Classical { diagonal } => (KindTag::Classical, Some(diagonal), None),
            ModelKind::Polynomial { degree } => (KindTag::Polynomial, None, Some(degree)),
            ModelKind::Exponential => (KindTag::Exponential, None, None),
        };
        Self {
            kind,
            diagonal,
            degree,
            tie_policy: m.tie_policy,
        }
    }
}

impl ModelSpec {
    pub fn classical() -> Self {
        Self {
            kind: ModelKind::Classical {
                diagonal: Diagonal::Hebbian,
            },
            tie_policy: TiePolicy::KeepCurrent,
        }
    }

    pub fn polynomial(degree: u32) -> Result<Self> {
        Self {
            kind: ModelKind::Polynomial { degree },
            tie_policy: TiePolicy::KeepCurrent,
        }
        .validated()
    }

    pub fn exponential() -> Self {
        Self {
            kind: ModelKind::Exponential,
            tie_policy: TiePolicy::KeepCurrent,
        }
    }

    pub fn with_tie_policy(self, tie_policy: TiePolicy) -> Self {
        Self { tie_policy, ..self }
    }

    pub fn with_diagonal(self, diagonal: Diagonal) -> Self {
        match self.kind {
            ModelKind::Classical { .. } => Self {
                kind: ModelKind::Classical { diagonal },
                ..self
            },
            _ => self,
        }
    }

    pub fn validated(self) -> Result<Self> {
        if let ModelKind::Polynomial { degree } = self.kind {
            if degree < 2 {
                return Err(Error::InvalidDegree(degree));
            }
        }
        Ok(self)
    }

    /// Short name used in CSV output.
    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Classical { .. } => "classical",
            ModelKind::Polynomial { .. } => "polynomial",
            ModelKind::Exponential => "exponential",
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self.kind {
            ModelKind::Polynomial { degree } => Some(degree),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpdateDecision {
    pub neuron: usize,
    pub new_value: i8,
    /// Sign of `Δ_i`; `Positive` keeps the current spin.
    pub delta_sign: Sign,
    /// Exponential model with a reference pattern: that pattern's term of
    /// `Δ_iE`. Otherwise zero.
    pub signal: SignedLog,
    /// Exponential model with a reference pattern: all other terms.
    pub noise: SignedLog,
    /// Exact `|noise| ≥ |signal|`; false when no signal is tracked.
    pub noise_dominates: bool,
}

fn resolve(current: i8, delta: Sign, policy: TiePolicy) -> i8 {
    match delta {
        Sign::Positive => current,
        Sign::Negative => -current,
        Sign::Zero => match policy {
            TiePolicy::KeepCurrent => current,
            TiePolicy::PlusOne => 1,
        },
    }
}

/// Decides neuron `i` from the current configuration without changing it.
pub fn decide_update(state: &NetworkState<'_>, i: usize, model: &ModelSpec) -> Result<UpdateDecision> {
    let mut scratch = field::exp_sum_for(state);
    decide_with(state, i, model, &mut scratch)
}

pub(crate) fn decide_with(
    state: &NetworkState<'_>,
    i: usize,
    model: &ModelSpec,
    scratch: &mut ExpSum,
) -> Result<UpdateDecision> {
    state.check_index(i)?;
    let current = state.sigma().spin(i);
    let mut signal = SignedLog::ZERO;
    let mut noise = SignedLog::ZERO;
    let mut noise_dominates = false;
    let delta_sign = match model.kind {
        ModelKind::Classical { diagonal } => {
            let mut h = classical_local_field(state, i)?;
            if diagonal == Diagonal::Zero {
                h -= state.store().n_patterns() as i64 * i64::from(current);
            }
            Sign::of_i64(h * i64::from(current))
        }
        ModelKind::Polynomial { degree } => {
            let h = nspin_local_field(state, i, degree)?.sign();
            if current > 0 {
                h
            } else {
                h.negate()
            }
        }
        ModelKind::Exponential => {
            scratch.clear();
            field::fill_exp_delta(state, i, scratch);
            let total = scratch.sign();
            if let Some(r) = state.reference() {
                let s: i64 = if state.store().patterns()[r].spin(i) == current { 1 } else { -1 };
                let exponent = state.overlaps()[r] - s;
                signal = SignedLog {
                    sign: Sign::of_i64(s),
                    log_abs: exponent as f64 + ln_two_sinh_one(),
                };
                scratch.add(exponent, -s);
                let n = scratch.evaluate();
                noise = SignedLog {
                    sign: n.sign,
                    log_abs: n.log_abs + ln_two_sinh_one(),
                };
                if n.sign != Sign::Zero {
                    // |noise| - |signal| as an exponential sum
                    let mut diff = ExpSum::with_range(0, 0);
                    diff.add_scaled(scratch, n.sign.as_i64());
                    diff.add(exponent, -1);
                    noise_dominates = diff.sign() != Sign::Negative;
                }
            }
            total
        }
    };
    Ok(UpdateDecision {
        neuron: i,
        new_value: resolve(current, delta_sign, model.tie_policy),
        delta_sign,
        signal,
        noise,
        noise_dominates,
    })
}

impl NetworkState<'_> {
    /// Decides neuron `i`, counts a tie if there is one, and applies the
    /// decision. Returns the decision.
    pub fn update_neuron(&mut self, i: usize, model: &ModelSpec) -> Result<UpdateDecision> {
        let d = decide_update(self, i, model)?;
        if d.delta_sign == Sign::Zero {
            self.record_tie();
        }
        self.set_spin(i, d.new_value)?;
        Ok(d)
    }
}
