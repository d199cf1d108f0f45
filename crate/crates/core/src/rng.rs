//! Platform-independent random streams.
//!
//! A stream for seed `s` is xoshiro256** whose 256-bit state is filled by
//! four successive SplitMix64 outputs starting from `s` (the
//! `SeedableRng::seed_from_u64` construction of `rand_xoshiro`). Uniform
//! reals use the top 53 bits of `next_u64`.
//!
//! Derived seeds for experiments are built with [`mix_seed`], a chain of
//! SplitMix64 finalizers, so a trial's stream never depends on scheduling.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

pub type Stream = Xoshiro256StarStar;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function applied to `x + GOLDEN`.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(splitmix64(master) ^ a) ^ b)`.
#[inline]
pub fn mix_seed(master: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ a) ^ b)
}

pub fn seeded(seed: u64) -> Stream {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Uniform on `(0, 1]`: `((x >> 11) + 1) * 2^-53`.
#[inline]
pub fn unit_open_closed<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `[0, 1)`: `(x >> 11) * 2^-53`.
#[inline]
pub fn unit<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
