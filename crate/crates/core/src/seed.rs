//! Stable seed derivation.
//!
//! Every random stream in the crate is seeded from a value produced here, so
//! results depend only on the logical coordinates of a task and never on
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all trajectories.
pub type TrajectoryRng = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a list of words into one 64-bit seed. Order matters.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng_from_seed(seed: u64) -> TrajectoryRng {
    ChaCha8Rng::seed_from_u64(seed)
}
