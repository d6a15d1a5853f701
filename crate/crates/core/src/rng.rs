//! Seeded randomness. ChaCha8 keeps streams stable across platforms and
//! crate upgrades, which the byte-identical output guarantee relies on.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for sub-task `stream` of a run seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A derived seed for sub-task `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    stream(seed, index).next_u64()
}
