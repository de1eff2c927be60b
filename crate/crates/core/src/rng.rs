//! Portable random number generation.
//!
//! Every random choice in the crate is driven by [`WalkRng`], a
//! Xoshiro256++ generator whose 256-bit state is expanded from a 64-bit seed
//! with SplitMix64. The mapping from raw 64-bit outputs to samples is fixed
//! here so that a port to another language reproduces the same instances:
//!
//! * floats: `(x >> 11) * 2^-53`, uniform on `[0, 1)`;
//! * bounded integers: Lemire's multiply-shift with rejection;
//! * Bernoulli(p): `float < p`.
//!
//! Independent substreams (resampling attempts, Monte Carlo trials) are
//! seeded with [`mix`].

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// The generator used throughout the crate.
pub type WalkRng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of substream `index` from a parent seed.
///
/// `mix(seed, k) = f(seed ^ f(k + γ))` with `f` the SplitMix64 finalizer and
/// `γ` the golden-ratio increment.
#[inline]
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64_finalize(seed ^ splitmix64_finalize(index.wrapping_add(GOLDEN_GAMMA)))
}

/// Creates a generator from a 64-bit seed (SplitMix64 state expansion).
pub fn rng_from_seed(seed: u64) -> WalkRng {
    WalkRng::seed_from_u64(seed)
}

/// Uniform draw on `[0, 1)` with 53 bits of precision.
#[inline]
pub fn next_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw on `(0, 1]`; safe to pass to `ln`.
#[inline]
pub fn next_f64_open0<R: RngCore>(rng: &mut R) -> f64 {
    1.0 - next_f64(rng)
}

/// Unbiased uniform integer in `0..bound`. `bound` must be positive.
#[inline]
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let mut m = (rng.next_u64() as u128) * (bound as u128);
    let mut low = m as u64;
    if low < bound {
        let threshold = bound.wrapping_neg() % bound;
        while low < threshold {
            m = (rng.next_u64() as u128) * (bound as u128);
            low = m as u64;
        }
    }
    (m >> 64) as u64
}

/// Bernoulli trial with success probability `p`.
#[inline]
pub fn bernoulli<R: RngCore>(rng: &mut R, p: f64) -> bool {
    next_f64(rng) < p
}
