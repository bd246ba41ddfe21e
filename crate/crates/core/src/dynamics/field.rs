//! Local quantities for the three dynamics, all computed from the cached
//! overlaps in `O(M)` per neuron.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::state::NetworkState;
use crate::error::{Error, Result};
use crate::expsum::{ExpSum, Sign, SignedLog};

/// `Σ_j J_ij σ_j` with `J_ij = Σ_μ ξ_i^μ ξ_j^μ`, including `j = i`.
///
/// Evaluated as `Σ_μ ξ_i^μ ⟨ξ^μ, σ⟩`; exact.
pub fn classical_local_field(state: &NetworkState<'_>, i: usize) -> Result<i64> {
    state.check_index(i)?;
    Ok(state
        .overlaps()
        .iter()
        .zip(state.store().column_bits(i))
        .map(|(&o, plus)| if plus { o } else { -o })
        .sum())
}

/// Exact integer that may exceed `i128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WideInt {
    Small(i128),
    Big(BigInt),
}

impl WideInt {
    pub fn sign(&self) -> Sign {
        match self {
            WideInt::Small(v) => match v.signum() {
                1 => Sign::Positive,
                -1 => Sign::Negative,
                _ => Sign::Zero,
            },
            WideInt::Big(v) => {
                if v.is_positive() {
                    Sign::Positive
                } else if v.is_negative() {
                    Sign::Negative
                } else {
                    Sign::Zero
                }
            }
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            WideInt::Small(v) => BigInt::from(*v),
            WideInt::Big(v) => v.clone(),
        }
    }

    pub fn to_signed_log(&self) -> SignedLog {
        let sign = self.sign();
        if sign == Sign::Zero {
            return SignedLog::ZERO;
        }
        let log_abs = match self {
            WideInt::Small(v) => (v.unsigned_abs() as f64).ln(),
            WideInt::Big(v) => {
                let shift = v.bits().saturating_sub(60);
                let m = (v.abs() >> shift).to_f64().unwrap_or(f64::MAX);
                m.ln() + shift as f64 * std::f64::consts::LN_2
            }
        };
        SignedLog { sign, log_abs }
    }
}

fn wide_pow(base: i64, exp: u32) -> WideInt {
    match (base as i128).checked_pow(exp) {
        Some(v) => WideInt::Small(v),
        None => WideInt::Big(BigInt::from(base).pow(exp)),
    }
}

/// `Σ_μ ξ_i^μ ⟨ξ^μ, σ⟩^{n-1}`: the n-spin field with Hebbian tensor, times
/// the positive constant `N^{n-1}`.
///
/// Accumulates in `i128` and switches to arbitrary precision on overflow, so
/// the value (and sign) is exact for any `N`, `n`, `M`.
pub fn nspin_local_field(state: &NetworkState<'_>, i: usize, degree: u32) -> Result<WideInt> {
    if degree < 2 {
        return Err(Error::InvalidDegree(degree));
    }
    state.check_index(i)?;
    let mut small: i128 = 0;
    let mut big: Option<BigInt> = None;
    for (&o, plus) in state.overlaps().iter().zip(state.store().column_bits(i)) {
        let term = wide_pow(o, degree - 1);
        match (&mut big, term) {
            (None, WideInt::Small(t)) => {
                let t = if plus { t } else { -t };
                match small.checked_add(t) {
                    Some(s) => small = s,
                    None => big = Some(BigInt::from(small) + t),
                }
            }
            (slot, term) => {
                let t = term.to_bigint();
                let acc = slot.get_or_insert_with(|| BigInt::from(small));
                if plus {
                    *acc += t;
                } else {
                    *acc -= t;
                }
            }
        }
    }
    Ok(match big {
        Some(b) => match b.to_i128() {
            Some(v) => WideInt::Small(v),
            None => WideInt::Big(b),
        },
        None => WideInt::Small(small),
    })
}

/// `ln(2 sinh 1)`: the common factor of every exponential-model term.
pub fn ln_two_sinh_one() -> f64 {
    (2.0 * 1f64.sinh()).ln()
}

/// Fills `sum` with `Δ_iE / (2 sinh 1) = Σ_μ s_μ e^{⟨ξ^μ,σ⟩ - s_μ}`,
/// `s_μ = σ_i ξ_i^μ`.
pub(crate) fn fill_exp_delta(state: &NetworkState<'_>, i: usize, sum: &mut ExpSum) {
    let up = state.sigma().spin(i) > 0;
    for (&o, plus) in state.overlaps().iter().zip(state.store().column_bits(i)) {
        let s: i64 = if plus == up { 1 } else { -1 };
        sum.add(o - s, s);
    }
}

pub(crate) fn exp_sum_for(state: &NetworkState<'_>) -> ExpSum {
    let n = state.n_neurons() as i64;
    ExpSum::with_range(-n - 1, n + 1)
}

/// Sign of `Δ_iE(σ) = Σ_μ [e^{σ_i ξ_i^μ + r_μ} - e^{-σ_i ξ_i^μ + r_μ}]`
/// (`r_μ = Σ_{j≠i} ξ_j^μ σ_j`) together with `ln |Δ_iE|`.
///
/// Positive means neuron `i` keeps its value. The sign is exact, including
/// exact `Zero` under cancellation; the log-magnitude is `-inf` for `Zero`.
pub fn exp_delta_energy_sign(state: &NetworkState<'_>, i: usize) -> Result<(Sign, f64)> {
    state.check_index(i)?;
    let mut sum = exp_sum_for(state);
    fill_exp_delta(state, i, &mut sum);
    let v = sum.evaluate();
    let log = if v.sign == Sign::Zero {
        f64::NEG_INFINITY
    } else {
        v.log_abs + ln_two_sinh_one()
    };
    Ok((v.sign, log))
}
