//! Seeded random engines and the fixed per-trial seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random engine used everywhere a seed is accepted.
pub type Engine = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Child seed for trial `index` of a run seeded with `seed`.
///
/// SplitMix64 finalizer applied to `seed + (index + 1)·γ`. This mapping is
/// part of the reproducibility contract and must not change.
pub fn mix64(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn engine(seed: u64) -> Engine {
    Engine::seed_from_u64(seed)
}

pub fn trial_engine(seed: u64, index: u64) -> Engine {
    engine(mix64(seed, index))
}
