//! Seeded random streams.
//!
//! Every entity (a maze, a trajectory, a noise sequence) draws from its own
//! ChaCha8 stream. The stream seed is derived from a master seed and an entity
//! index with the SplitMix64 finalizer, so generating entity `i` never depends
//! on how many other entities were generated before it or on which thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every stochastic operation in this crate.
pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function (Steele, Lea and Flood).
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `mix(master, index)`: seed of the stream for entity `index`.
#[inline]
pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Folds a path of indices into a single stream seed: `mix(mix(master, a), b)...`.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |seed, &i| mix(seed, i))
}

pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
