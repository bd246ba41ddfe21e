//! Closed-form capacity thresholds and large-deviation bounds.
//!
//! Natural logarithms throughout; `0 · ln 0 = 0`.

use serde::Serialize;

use crate::error::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Cramér rate function for fair ±1 variables,
/// `I(x) = ((1+x) ln(1+x) + (1-x) ln(1-x)) / 2` on `[-1, 1]`.
pub fn entropy_i(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(invalid(format!("I(x) needs |x| <= 1, got {x}")));
    }
    let a = x.abs();
    if a < 0.1 {
        // Σ_{k≥1} x^{2k} / (2k (2k-1)); 9 terms reach 1e-18 relative at |x| = 0.1.
        let x2 = a * a;
        let mut pow = x2;
        let mut sum = 0.0;
        for k in 1..=9u32 {
            let k2 = f64::from(2 * k);
            sum += pow / (k2 * (k2 - 1.0));
            pow *= x2;
        }
        return Ok(sum);
    }
    let up = (1.0 + a) * a.ln_1p();
    let down = if a == 1.0 { 0.0 } else { (1.0 - a) * (-a).ln_1p() };
    Ok(0.5 * (up + down))
}

/// Largest admissible load exponent for corruption fraction `rho`:
/// `α*(ρ) = I(1 - 2ρ) / 2`.
pub fn alpha_star(rho: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&rho) {
        return Err(invalid(format!("rho must lie in [0, 1/2), got {rho}")));
    }
    entropy_i(1.0 - 2.0 * rho).map(|i| 0.5 * i)
}

/// `k!!` for odd `k ≥ 1`, `None` on overflow.
fn odd_double_factorial(k: u32) -> Option<u128> {
    (1..=k).step_by(2).try_fold(1u128, |acc, j| acc.checked_mul(u128::from(j)))
}

/// `c_n = 2 (2n - 3)!!`, the capacity constant of the degree-`n` model.
pub fn c_n(degree: u32) -> Result<u128> {
    if degree < 2 {
        return Err(Error::InvalidDegree(degree));
    }
    odd_double_factorial(2 * degree - 3)
        .and_then(|v| v.checked_mul(2))
        .ok_or_else(|| invalid(format!("c_n overflows u128 at n = {degree}")))
}

/// `E[Z^{2l}] = (2l - 1)!!` for standard normal `Z`.
pub fn gaussian_even_moment(l: u32) -> Result<u128> {
    if l == 0 {
        return Err(invalid("moment order l must be at least 1"));
    }
    odd_double_factorial(2 * l - 1).ok_or_else(|| invalid(format!("moment overflows u128 at l = {l}")))
}

/// `N^{n-1} / (c ln N)` patterns.
pub fn polynomial_capacity(n_neurons: f64, degree: u32, c: f64) -> Result<f64> {
    if n_neurons.is_nan() || n_neurons < 2.0 {
        return Err(invalid(format!("N must be at least 2, got {n_neurons}")));
    }
    if degree < 2 {
        return Err(Error::InvalidDegree(degree));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    Ok(n_neurons.powi(degree as i32 - 1) / (c * n_neurons.ln()))
}

/// `exp(-m ε² / (2 (p + ε)))`, bounding `P(Bin(m, p) ≥ m (p + ε))`.
pub fn binomial_tail_bound(m: u64, p: f64, eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) || eps.is_nan() || eps <= 0.0 || p + eps > 1.0 {
        return Err(invalid(format!("need p in [0,1], eps > 0, p + eps <= 1; got p={p}, eps={eps}")));
    }
    Ok((-(m as f64) * eps * eps / (2.0 * (p + eps))).exp())
}

/// `exp(-m I(x))`, bounding `P(S_m ≥ m x)` for a sum of `m` fair ±1 variables.
pub fn rademacher_tail_bound(m: u64, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("x must lie in (0, 1), got {x}")));
    }
    Ok((-(m as f64) * entropy_i(x)?).exp())
}

/// `ln P(S_m ≥ threshold)` for a sum of `m` fair ±1 variables, by summing
/// binomial weights in log space. `strict` selects `>` instead of `≥`.
pub fn ln_rademacher_tail(m: u64, threshold: f64, strict: bool) -> f64 {
    // S_m = 2k - m with k ~ Bin(m, 1/2)
    let mut ln_c = 0.0f64;
    let mut terms = Vec::new();
    for k in 0..=m {
        if k > 0 {
            ln_c += ((m - k + 1) as f64).ln() - (k as f64).ln();
        }
        let s = 2.0 * k as f64 - m as f64;
        if (strict && s > threshold) || (!strict && s >= threshold) {
            terms.push(ln_c);
        }
    }
    if terms.is_empty() {
        return f64::NEG_INFINITY;
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln() - m as f64 * std::f64::consts::LN_2
}

/// Empirical rate `-(1/m) ln P(S_m ≥ m x)`, which tends to `I(x)`.
pub fn rademacher_empirical_rate(m: u64, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(invalid(format!("x must lie in (0, 1), got {x}")));
    }
    Ok(-ln_rademacher_tail(m, m as f64 * x, false) / m as f64)
}

/// Threshold quantities for a corruption fraction and, optionally, a network
/// size, load exponent or polynomial degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub rho: f64,
    pub alpha_star: f64,
    /// Load exponent used for `m_max`; `alpha_star` unless given.
    pub alpha: f64,
    pub n_neurons: Option<u64>,
    /// `exp(alpha · N)`.
    pub m_max: Option<f64>,
    pub degree: Option<u32>,
    pub c_n: Option<u128>,
    /// `N^{n-1} / (c_n ln N)`.
    pub polynomial_capacity: Option<f64>,
}

impl ThresholdReport {
    pub fn new(rho: f64, n_neurons: Option<u64>, alpha: Option<f64>, degree: Option<u32>) -> Result<Self> {
        let a_star = alpha_star(rho)?;
        let alpha = alpha.unwrap_or(a_star);
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(invalid(format!("alpha must be a non-negative number, got {alpha}")));
        }
        let c = degree.map(c_n).transpose()?;
        let capacity = match (n_neurons, degree, c) {
            (Some(n), Some(d), Some(c)) if n >= 2 => Some(polynomial_capacity(n as f64, d, c as f64)?),
            _ => None,
        };
        Ok(Self {
            rho,
            alpha_star: a_star,
            alpha,
            n_neurons,
            m_max: n_neurons.map(|n| (alpha * n as f64).exp()),
            degree,
            c_n: c,
            polynomial_capacity: capacity,
        })
    }
}

/// `(rho, alpha_star)` on `points` equally spaced values of `[0, 1/2)`.
pub fn alpha_star_curve(points: usize) -> Result<Vec<(f64, f64)>> {
    if points == 0 {
        return Err(invalid("points must be at least 1"));
    }
    (0..points)
        .map(|k| {
            let rho = 0.5 * k as f64 / points as f64;
            alpha_star(rho).map(|a| (rho, a))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn rate_function_endpoints() {
        assert_eq!(entropy_i(0.0).unwrap(), 0.0);
        assert_eq!(entropy_i(1.0).unwrap(), LN_2);
        assert_eq!(entropy_i(-1.0).unwrap(), LN_2);
        assert!(entropy_i(1.0000001).is_err());
        assert!(entropy_i(f64::NAN).is_err());
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let x: f64 = 0.099_999_999_999_9;
        let direct = 0.5 * ((1.0 + x) * x.ln_1p() + (1.0 - x) * (-x).ln_1p());
        let series = entropy_i(x).unwrap();
        assert!((direct - series).abs() < 1e-12 * direct);
    }

    #[test]
    fn alpha_star_values() {
        assert_eq!(alpha_star(0.0).unwrap(), LN_2 / 2.0);
        assert_eq!(alpha_star(0.25).unwrap(), entropy_i(0.5).unwrap() / 2.0);
        assert!(alpha_star(0.5).is_err());
        assert!(alpha_star(-0.1).is_err());
        assert!(alpha_star(0.4999999).unwrap() < 1e-12);
        let mut prev = f64::INFINITY;
        for k in 0..500 {
            let a = alpha_star(k as f64 / 1000.0).unwrap();
            assert!(a < prev && a > 0.0 && a <= LN_2 / 2.0);
            prev = a;
        }
    }

    #[test]
    fn capacity_constants() {
        assert_eq!(c_n(2).unwrap(), 2);
        assert_eq!(c_n(3).unwrap(), 6);
        assert_eq!(c_n(4).unwrap(), 30);
        assert!(c_n(1).is_err());
        let mut n = 2;
        while let Ok(next) = c_n(n + 1) {
            assert_eq!(next, c_n(n).unwrap() * u128::from(2 * n - 1));
            n += 1;
        }
        assert!(n > 20);
        assert_eq!(gaussian_even_moment(1).unwrap(), 1);
        assert_eq!(gaussian_even_moment(2).unwrap(), 3);
        assert_eq!(gaussian_even_moment(3).unwrap(), 15);
        assert!(gaussian_even_moment(0).is_err());
        assert!(c_n(200).is_err());
    }

    #[test]
    fn polynomial_capacity_values() {
        let e2 = std::f64::consts::E.powi(2);
        assert!((polynomial_capacity(e2, 2, 1.0).unwrap() - e2 / 2.0).abs() < 1e-12);
        // 3600 / (12 ln 60), reference from 50-digit arithmetic
        let v = polynomial_capacity(60.0, 3, 12.0).unwrap();
        assert!((v - 73.271_801_002_791_68).abs() < 1e-10, "{v}");
        assert!(polynomial_capacity(1.0, 2, 1.0).is_err());
        assert!(polynomial_capacity(10.0, 2, 0.0).is_err());
        for n in [3, 4] {
            let mut prev = 0.0;
            for big_n in 3..500 {
                let v = polynomial_capacity(big_n as f64, n, 2.0).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(binomial_tail_bound(100, 0.1, 0.1).unwrap(), (-2.5f64).exp());
        assert!(binomial_tail_bound(100, 0.5, 1e-9).unwrap() > 0.999_999);
        assert!(binomial_tail_bound(0, 0.5, 0.1).is_err());
        assert!(binomial_tail_bound(10, 0.95, 0.1).is_err());
        assert!(binomial_tail_bound(10, 0.5, 0.0).is_err());
        assert!(rademacher_tail_bound(10, 1.0).is_err());
        assert!(rademacher_tail_bound(10, 0.0).is_err());
        // x -> 1: exp(-m I(x)) -> 2^{-m}
        let near = rademacher_tail_bound(10, 1.0 - 1e-12).unwrap();
        assert!((near - 2f64.powi(-10)).abs() < 1e-12);
    }

    #[test]
    fn report_and_curve() {
        let r = ThresholdReport::new(0.0, Some(40), None, Some(3)).unwrap();
        assert_eq!(r.alpha_star, LN_2 / 2.0);
        assert!((r.m_max.unwrap() - (20.0 * LN_2).exp()).abs() < 1e-3);
        assert_eq!(r.c_n, Some(6));
        let curve = alpha_star_curve(11).unwrap();
        assert_eq!(curve.len(), 11);
        assert!(curve.windows(2).all(|w| w[1].1 < w[0].1));
    }
}
