//! Sums of the form `Σ_k c_k e^k` with integer coefficients and integer
//! exponents, evaluated with an exact sign.
//!
//! Every exponential-interaction quantity in the crate reduces to such a sum
//! because overlaps are integers. Coefficients are collected per exponent, so
//! exact cancellation is detected in integer arithmetic: the sum is zero if
//! and only if every coefficient is zero (`e` is transcendental). Otherwise
//! the sign is taken from a shifted-exponent `f64` evaluation when it clears a
//! rigorous rounding bound, and from a big-integer fixed-point Horner scheme
//! in powers of `1/e` when it does not.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_i64(v: i64) -> Self {
        match v.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn of_f64(v: f64) -> Self {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// An extended-range real `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedLog {
    pub sign: Sign,
    /// `ln |x|`; `-inf` when `sign` is `Zero`.
    pub log_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: Sign::Zero,
        log_abs: f64::NEG_INFINITY,
    };

    pub fn to_f64(self) -> f64 {
        self.sign.as_i64() as f64 * self.log_abs.exp()
    }
}

const FIXED_POINT_START_BITS: u64 = 256;
const FIXED_POINT_MAX_BITS: u64 = 1 << 15;

/// `Σ_k c_k e^k` over a contiguous exponent window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSum {
    min_exp: i64,
    coeffs: Vec<i64>,
}

impl ExpSum {
    /// Empty sum able to hold exponents in `min_exp..=max_exp` without
    /// reallocating.
    pub fn with_range(min_exp: i64, max_exp: i64) -> Self {
        let len = (max_exp - min_exp + 1).max(0) as usize;
        Self {
            min_exp,
            coeffs: vec![0; len],
        }
    }

    pub fn clear(&mut self) {
        self.coeffs.fill(0);
    }

    /// Adds `coeff · e^exponent`.
    #[inline]
    pub fn add(&mut self, exponent: i64, coeff: i64) {
        if exponent < self.min_exp {
            let grow = (self.min_exp - exponent) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(0, grow));
            self.min_exp = exponent;
        }
        let idx = (exponent - self.min_exp) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, 0);
        }
        self.coeffs[idx] += coeff;
    }

    /// Adds `factor · other` term by term.
    pub fn add_scaled(&mut self, other: &ExpSum, factor: i64) {
        for (j, &c) in other.coeffs.iter().enumerate() {
            if c != 0 {
                self.add(other.min_exp + j as i64, c * factor);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `(first nonzero index, last nonzero index)` into `coeffs`.
    fn support(&self) -> Option<(usize, usize)> {
        let lo = self.coeffs.iter().position(|&c| c != 0)?;
        let hi = self.coeffs.iter().rposition(|&c| c != 0)?;
        Some((lo, hi))
    }

    /// Exact sign of the sum.
    pub fn sign(&self) -> Sign {
        self.evaluate().sign
    }

    /// Sign and `ln |sum|`. The sign is exact; the magnitude is accurate to
    /// roughly `f64` precision.
    pub fn evaluate(&self) -> SignedLog {
        let Some((lo, hi)) = self.support() else {
            return SignedLog::ZERO;
        };
        let top = self.min_exp + hi as i64;
        let window = &self.coeffs[lo..=hi];

        let mut sum = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut abs_coeffs = 0.0f64;
        for (j, &c) in window.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let shift = j as i64 - (hi - lo) as i64;
            let term = c as f64 * (shift as f64).exp();
            sum += term;
            abs_sum += term.abs();
            abs_coeffs += (c as f64).abs();
        }
        // exp and the product each cost at most one rounding, the recursive
        // sum at most (len - 1); terms lost to underflow are below 1e-300 each.
        let len = window.len() as f64;
        let bound = 2.0 * (len + 4.0) * f64::EPSILON * abs_sum + abs_coeffs * 1e-300;
        if sum.abs() > bound {
            return SignedLog {
                sign: Sign::of_f64(sum),
                log_abs: sum.abs().ln() + top as f64,
            };
        }
        fixed_point_evaluate(window, top)
    }
}

/// `round(e^{-1} · 2^bits)` with error at most one unit.
fn inv_e_fixed(bits: u64) -> BigInt {
    let guard = 64;
    let one = BigInt::from(1) << (bits + guard);
    let mut term = one.clone();
    let mut acc = one;
    let mut k = 1u32;
    while !term.is_zero() {
        term /= k;
        if k % 2 == 1 {
            acc -= &term;
        } else {
            acc += &term;
        }
        k += 1;
    }
    (acc + (BigInt::from(1) << (guard - 1))) >> guard
}

fn ln_abs_fixed(value: &BigInt, bits: u64) -> f64 {
    let width = value.bits();
    let shift = width.saturating_sub(60);
    let mantissa = (value.abs() >> shift).to_f64().unwrap_or(f64::MAX);
    mantissa.ln() + (shift as f64 - bits as f64) * std::f64::consts::LN_2
}

/// Horner evaluation of `Σ_j c_j e^{j - top_index}` in powers of `1/e`.
///
/// Each step loses at most `|acc| 2^-P + 1` units, and `1/e < 1` contracts
/// earlier errors, so the final error is below `4 (Σ|c| + 1)` units.
fn fixed_point_evaluate(window: &[i64], top: i64) -> SignedLog {
    let abs_coeffs: i128 = window.iter().map(|&c| (c as i128).abs()).sum();
    let mut bits = FIXED_POINT_START_BITS;
    loop {
        let inv_e = inv_e_fixed(bits);
        let mut acc = BigInt::zero();
        for &c in window {
            acc = (acc * &inv_e) >> bits;
            acc += BigInt::from(c) << bits;
        }
        let bound = BigInt::from(4) * (BigInt::from(abs_coeffs) + 1);
        if acc.abs() > bound || bits >= FIXED_POINT_MAX_BITS {
            let sign = if acc.is_positive() {
                Sign::Positive
            } else if acc.is_negative() {
                Sign::Negative
            } else {
                Sign::Zero
            };
            if sign == Sign::Zero {
                return SignedLog::ZERO;
            }
            return SignedLog {
                sign,
                log_abs: ln_abs_fixed(&acc, bits) + top as f64,
            };
        }
        bits *= 2;
    }
}
