//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha8 keyed by a 64-bit seed. Parallel
//! work items get their own stream id on the same key, so results do not depend
//! on which worker handles which item.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream `stream` of the generator keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed from a parent seed and a tuple of coordinates.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |acc, &part| {
        let mut rng = substream(acc, part);
        rng.next_u64()
    })
}
