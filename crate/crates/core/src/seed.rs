//! Deterministic seed derivation.
//!
//! Every random stream in the crate is seeded from a [`SeedSpec`]: a master
//! seed plus a `(purpose, index)` label. The derived 64-bit seed is
//!
//! ```text
//! h0 = splitmix64(master ^ fnv1a64(purpose))
//! derived = splitmix64(h0 ^ splitmix64(index + GOLDEN))
//! ```
//!
//! where `splitmix64` is the finalizer of Steele, Lea and Flood's SplitMix64
//! generator. The derived seed then initialises a ChaCha8 stream. Nothing
//! here depends on thread identity or scheduling, so results are identical
//! for any thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function (a bijective avalanche mixer on `u64`).
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash, used to turn purpose tags into integers.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// A labelled random stream: `(master_seed, purpose, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub purpose: &'static str,
    pub index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, purpose: &'static str, index: u64) -> Self {
        Self {
            master_seed,
            purpose,
            index,
        }
    }

    /// Same master seed and index, different purpose.
    pub fn with_purpose(self, purpose: &'static str) -> Self {
        Self { purpose, ..self }
    }

    pub fn derived_seed(&self) -> u64 {
        let h0 = splitmix64(self.master_seed ^ fnv1a64(self.purpose.as_bytes()));
        splitmix64(h0 ^ splitmix64(self.index.wrapping_add(GOLDEN)))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.derived_seed())
    }
}
