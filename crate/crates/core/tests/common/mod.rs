//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the library's arithmetic.

#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spins(n: usize, rng: &mut ChaCha8Rng) -> Vec<i8> {
    (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

/// A random instance: `m` patterns and one configuration on `n` neurons.
pub struct Instance {
    pub xi: Vec<Vec<i8>>,
    pub sigma: Vec<i8>,
}

impl Instance {
    pub fn random(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Self {
        let xi: Vec<Vec<i8>> = (0..m).map(|_| random_spins(n, rng)).collect();
        // Half the time start near a stored pattern, where ties and
        // cancellations are most likely.
        let sigma = if rng.random::<bool>() {
            let mut s = xi[rng.random_range(0..m)].clone();
            for _ in 0..rng.random_range(0..=n / 2) {
                let j = rng.random_range(0..n);
                s[j] = -s[j];
            }
            s
        } else {
            random_spins(n, rng)
        };
        Self { xi, sigma }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// `Σ_{j≠i} ξ_j^μ σ_j`.
    pub fn rest(&self, mu: usize, i: usize) -> i64 {
        (0..self.n())
            .filter(|&j| j != i)
            .map(|j| i64::from(self.xi[mu][j]) * i64::from(self.sigma[j]))
            .sum()
    }
}

/// Argument of the sign in the generalized rule with `F(x) = x²`:
/// `Σ_μ F(ξ_i^μ + r_μ) - F(-ξ_i^μ + r_μ)`.
pub fn generalized_square_rule(inst: &Instance, i: usize) -> i64 {
    (0..inst.xi.len())
        .map(|mu| {
            let r = inst.rest(mu, i);
            let x = i64::from(inst.xi[mu][i]);
            (x + r).pow(2) - (-x + r).pow(2)
        })
        .sum()
}

/// Materializes `W_{i, j_1 .. j_{n-1}} = Σ_μ ξ_i ξ_{j_1} .. ξ_{j_{n-1}}`
/// (without the positive `N^{1-n}` factor) for fixed `i`, then contracts it
/// with `σ_{j_1} .. σ_{j_{n-1}}` over all index tuples.
pub fn tensor_contraction(inst: &Instance, i: usize, degree: u32) -> i128 {
    let n = inst.n();
    let k = degree as usize - 1;
    let size = n.pow(k as u32);
    let mut w = vec![0i128; size];
    for (flat, entry) in w.iter_mut().enumerate() {
        let idx = digits(flat, n, k);
        for xi in &inst.xi {
            let mut prod = i128::from(xi[i]);
            for &j in &idx {
                prod *= i128::from(xi[j]);
            }
            *entry += prod;
        }
    }
    w.iter()
        .enumerate()
        .map(|(flat, &entry)| {
            let sign: i128 = digits(flat, n, k).iter().map(|&j| i128::from(inst.sigma[j])).product();
            sign * entry
        })
        .sum()
}

fn digits(mut flat: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(flat % base);
        flat /= base;
    }
    out
}

/// Fixed-point arithmetic with `FRAC_BITS` fractional bits.
pub const FRAC_BITS: u32 = 320;

fn one() -> BigInt {
    BigInt::one() << FRAC_BITS
}

/// `e` by its Taylor series, truncated below one unit in the last place.
pub fn e_fixed() -> BigInt {
    let mut term = one();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        sum += &term;
        term /= k;
        k += 1;
    }
    sum
}

/// `e^k` in fixed point by repeated multiplication.
pub fn exp_fixed(k: i64, e: &BigInt) -> BigInt {
    let mut r = one();
    for _ in 0..k.unsigned_abs() {
        r = (r * e) >> FRAC_BITS;
    }
    if k >= 0 {
        r
    } else {
        (BigInt::one() << (2 * FRAC_BITS)) / r
    }
}

/// Sign of `Δ_iE(σ) = Σ_μ e^{σ_i ξ_i + r_μ} - e^{-σ_i ξ_i + r_μ}` evaluated
/// directly from the definition.
///
/// Exact zero is decided by collecting integer coefficients per power of `e`
/// (`e` is transcendental); otherwise the fixed-point value must clear its
/// error bound by a wide margin, or the oracle panics.
pub fn exp_delta_sign(inst: &Instance, i: usize, e: &BigInt) -> Ordering {
    let mut coeffs = std::collections::BTreeMap::<i64, i64>::new();
    let mut value = BigInt::zero();
    for mu in 0..inst.xi.len() {
        let r = inst.rest(mu, i);
        let s = i64::from(inst.sigma[i]) * i64::from(inst.xi[mu][i]);
        *coeffs.entry(s + r).or_default() += 1;
        *coeffs.entry(-s + r).or_default() -= 1;
        value += exp_fixed(s + r, e) - exp_fixed(-s + r, e);
    }
    if coeffs.values().all(|&c| c == 0) {
        return Ordering::Equal;
    }
    let tolerance = BigInt::one() << (FRAC_BITS - 200);
    assert!(value.abs() > tolerance, "oracle cannot resolve the sign");
    if value.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// `num / 2^den_log2 ≤ bound`, decided exactly using the binary value of
/// `bound`.
pub fn dyadic_le(num: &BigUint, den_log2: u64, bound: f64) -> bool {
    assert!(bound.is_finite() && bound >= 0.0);
    if bound == 0.0 {
        return num.is_zero();
    }
    let bits = bound.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let (mant, exp) = if raw_exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), raw_exp - 1075)
    };
    let shift = exp + den_log2 as i64;
    let mant = BigUint::from(mant);
    if shift >= 0 {
        *num <= mant << shift as u64
    } else {
        (num << (-shift) as u64) <= mant
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    let mut r = BigUint::one();
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

/// Histogram of `popcount(v)` over all `v < 2^m`.
pub fn popcount_histogram(m: u32) -> Vec<u64> {
    let mut h = vec![0u64; m as usize + 1];
    for v in 0u64..(1 << m) {
        h[v.count_ones() as usize] += 1;
    }
    h
}

/// Simpson's rule for `∫_a^b f`, `n` even.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Parses the committed `x,i` fixture of the rate function.
pub fn rate_function_fixture() -> Vec<(f64, f64)> {
    let text = include_str!("../fixtures/entropy_grid.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let (x, v) = line.split_once(',').expect("two columns");
            (x.parse().expect("x"), v.parse().expect("I(x)"))
        })
        .collect()
}
