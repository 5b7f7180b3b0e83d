//! Seed derivation.
//!
//! Every stochastic step draws from its own ChaCha stream, keyed by the run
//! seed and the position of the step in the run (generation, particle).
//! Results therefore do not depend on the order in which independent steps
//! are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a seed with a sequence of coordinates into a new seed.
pub fn derive_seed(seed: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(mix64(seed), |acc, &c| mix64(acc ^ mix64(c.wrapping_add(GOLDEN))))
}

/// Independent generator for the stream at `coords` under `seed`.
pub fn stream(seed: u64, coords: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(seed, coords))
}
