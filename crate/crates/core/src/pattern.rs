//! Bipolar patterns, pattern stores, seeded generation and corruption.
//!
//! A [`Pattern`] is a ±1 vector stored as packed bits (bit set ⇔ +1,
//! little-endian within each `u64` word). All public contracts are stated in
//! ±1 terms; the encoding never leaks out of this module except through
//! [`Pattern::words`].

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::seed::SeedSpec;

const WORD: usize = 64;

#[inline]
fn n_words(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
fn tail_mask(n: usize) -> u64 {
    match n % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    words: Vec<u64>,
    n_neurons: usize,
}

impl Pattern {
    /// Pattern with every entry equal to +1.
    pub fn plus_ones(n_neurons: usize) -> Result<Self> {
        if n_neurons == 0 {
            return Err(Error::EmptyPattern);
        }
        let mut words = vec![u64::MAX; n_words(n_neurons)];
        *words.last_mut().unwrap() &= tail_mask(n_neurons);
        Ok(Self { words, n_neurons })
    }

    /// Builds a pattern from ±1 values. Any other value is rejected.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut words = vec![0u64; n_words(spins.len())];
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => words[i / WORD] |= 1 << (i % WORD),
                -1 => {}
                other => return Err(Error::Format(format!("spin {other} at {i} is not ±1"))),
            }
        }
        Ok(Self {
            words,
            n_neurons: spins.len(),
        })
    }

    pub(crate) fn from_words(words: Vec<u64>, n_neurons: usize) -> Self {
        debug_assert_eq!(words.len(), n_words(n_neurons));
        debug_assert_eq!(words.last().map(|w| w & !tail_mask(n_neurons)), Some(0));
        Self { words, n_neurons }
    }

    pub fn random<R: RngCore + ?Sized>(n_neurons: usize, rng: &mut R) -> Result<Self> {
        if n_neurons == 0 {
            return Err(Error::EmptyPattern);
        }
        let mut words: Vec<u64> = (0..n_words(n_neurons)).map(|_| rng.next_u64()).collect();
        *words.last_mut().unwrap() &= tail_mask(n_neurons);
        Ok(Self { words, n_neurons })
    }

    #[inline]
    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Entry `i` as ±1.
    #[inline]
    pub fn spin(&self, i: usize) -> i8 {
        if self.bit(i) {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set_spin(&mut self, i: usize, value: i8) {
        debug_assert!(value == 1 || value == -1);
        let mask = 1u64 << (i % WORD);
        if value > 0 {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.n_neurons).map(|i| self.spin(i)).collect()
    }

    /// The global sign flip `-self`.
    pub fn negated(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        *words.last_mut().unwrap() &= tail_mask(self.n_neurons);
        Self {
            words,
            n_neurons: self.n_neurons,
        }
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        check_len(self.n_neurons, other.n_neurons)?;
        Ok(self.hamming_unchecked(other))
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Sum of `±1` products, computed as `N - 2 * hamming`.
    #[inline]
    pub(crate) fn overlap_unchecked(&self, other: &Self) -> i64 {
        self.n_neurons as i64 - 2 * self.hamming_unchecked(other) as i64
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Inner product `Σ_i a_i b_i` of two ±1 patterns.
pub fn overlap(a: &Pattern, b: &Pattern) -> Result<i64> {
    check_len(a.n_neurons, b.n_neurons)?;
    Ok(a.overlap_unchecked(b))
}

/// `M ≥ 1` patterns of a common length `N`.
///
/// Besides the row-major patterns the store keeps a transposed bit matrix so
/// that `ξ_i^μ` for all `μ` at a fixed neuron `i` is one contiguous word run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStore {
    patterns: Vec<Pattern>,
    n_neurons: usize,
    columns: Vec<u64>,
    col_words: usize,
}

impl PatternStore {
    pub fn new(patterns: Vec<Pattern>) -> Result<Self> {
        let first = patterns.first().ok_or(Error::EmptyStore)?;
        let n_neurons = first.n_neurons;
        for p in &patterns {
            check_len(n_neurons, p.n_neurons)?;
        }
        let col_words = n_words(patterns.len());
        let mut columns = vec![0u64; n_neurons * col_words];
        for (mu, p) in patterns.iter().enumerate() {
            for (w, &word) in p.words.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let i = w * WORD + bits.trailing_zeros() as usize;
                    columns[i * col_words + mu / WORD] |= 1 << (mu % WORD);
                    bits &= bits - 1;
                }
            }
        }
        Ok(Self {
            patterns,
            n_neurons,
            columns,
            col_words,
        })
    }

    #[inline]
    pub fn n_patterns(&self) -> usize {
        self.patterns.len()
    }

    #[inline]
    pub fn n_neurons(&self) -> usize {
        self.n_neurons
    }

    #[inline]
    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn get(&self, mu: usize) -> Result<&Pattern> {
        self.patterns.get(mu).ok_or(Error::PatternOutOfRange {
            index: mu,
            n_patterns: self.patterns.len(),
        })
    }

    /// Packed column `(ξ_i^μ)_μ` for neuron `i` (bit set ⇔ +1).
    #[inline]
    pub(crate) fn column(&self, i: usize) -> &[u64] {
        &self.columns[i * self.col_words..(i + 1) * self.col_words]
    }

    /// Iterates `ξ_i^μ > 0` over all `μ` for neuron `i`.
    #[inline]
    pub(crate) fn column_bits(&self, i: usize) -> impl Iterator<Item = bool> + '_ {
        let col = self.column(i);
        (0..self.patterns.len()).map(move |mu| (col[mu / WORD] >> (mu % WORD)) & 1 == 1)
    }

    /// `⟨ξ^μ, σ⟩` for every stored pattern.
    pub fn overlaps(&self, sigma: &Pattern) -> Result<Vec<i64>> {
        check_len(self.n_neurons, sigma.n_neurons)?;
        Ok(self
            .patterns
            .iter()
            .map(|p| p.overlap_unchecked(sigma))
            .collect())
    }
}

/// `M` i.i.d. fair ±1 patterns of length `N`, a pure function of `seed`.
///
/// Patterns are drawn in order from a single stream, so for a fixed seed the
/// store with `M` patterns is a prefix of the store with `M' > M` patterns.
pub fn generate_patterns(n_neurons: usize, n_patterns: usize, seed: SeedSpec) -> Result<PatternStore> {
    if n_neurons == 0 {
        return Err(Error::EmptyPattern);
    }
    if n_patterns == 0 {
        return Err(Error::EmptyStore);
    }
    let mut rng = seed.rng();
    let patterns = (0..n_patterns)
        .map(|_| Pattern::random(n_neurons, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    PatternStore::new(patterns)
}

/// First `k` entries of a uniformly random permutation of `0..n`.
///
/// The chosen sets are nested in `k` for a fixed RNG state, which makes
/// corruption levels comparable under matched seeds.
fn random_subset<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = idx.partial_shuffle(rng, k);
    chosen.to_vec()
}

fn flip_positions(pattern: &Pattern, positions: &[usize]) -> Pattern {
    let mut out = pattern.clone();
    for &i in positions {
        out.flip(i);
    }
    out
}

/// Uniform sample from the Hamming sphere of radius `n_flips` around `pattern`.
pub fn corrupt_on_sphere(pattern: &Pattern, n_flips: usize, seed: SeedSpec) -> Result<Pattern> {
    let n = pattern.n_neurons();
    if n_flips > n {
        return Err(Error::TooManyFlips {
            what: "n_flips",
            value: n_flips,
            n_neurons: n,
        });
    }
    let mut rng = seed.rng();
    Ok(flip_positions(pattern, &random_subset(n, n_flips, &mut rng)))
}

/// `ln C(n, k)` for `k = 0..=kmax`.
fn ln_binomials(n: usize, kmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut acc = 0.0f64;
    out.push(acc);
    for k in 1..=kmax {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Uniform sample from the Hamming ball of radius `max_flips` around `pattern`.
///
/// The radius `k` is drawn with probability `C(N,k) / |B|`, then a uniform
/// `k`-subset is flipped.
pub fn corrupt_in_ball(pattern: &Pattern, max_flips: usize, seed: SeedSpec) -> Result<Pattern> {
    let n = pattern.n_neurons();
    if max_flips > n {
        return Err(Error::TooManyFlips {
            what: "max_flips",
            value: max_flips,
            n_neurons: n,
        });
    }
    let mut rng = seed.rng();
    let ln_c = ln_binomials(n, max_flips);
    let top = ln_c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = ln_c.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut radius = max_flips;
    for (k, w) in weights.iter().enumerate() {
        if u < *w {
            radius = k;
            break;
        }
        u -= w;
    }
    Ok(flip_positions(pattern, &random_subset(n, radius, &mut rng)))
}
