//! Per-sample random streams.
//!
//! Sample `m` of an ensemble seeded with `master_seed` always reads from
//! ChaCha8 keyed by `master_seed` on stream id `m`. Streams are disjoint
//! 2^64-block sequences of the same keystream, so the draws of a sample do
//! not depend on which worker evaluates it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Random stream for sample `index` of an ensemble.
pub fn sample_stream(master_seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Stream with a distinct key, for auxiliary estimates (calibration rounds,
/// validation ensembles) that must not overlap the main ensemble's draws.
pub fn derived_seed(master_seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master_seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
