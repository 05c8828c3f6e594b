//! Reproducible random streams.
//!
//! Every stochastic routine in this crate takes a `(seed, index)` pair and
//! draws from an independent ChaCha stream, so replications can run in any
//! order and on any number of workers without changing the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent substream `index` of the generator family keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stable derived seed for a nested component (scenario within a grid,
/// table row within a report). SplitMix64 finalizer on both inputs.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(label)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
