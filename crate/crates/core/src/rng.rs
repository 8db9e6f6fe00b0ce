//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng`): a counter-based stream cipher with a 64-bit
//! block counter and a 64-bit stream id. A base seed selects the key through
//! `seed_from_u64`; the trial index selects the stream. Trial `k` of an
//! experiment therefore draws from the same numbers regardless of how many
//! workers run or in which order trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generator for a single seed (stream 0).
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` of an experiment seeded with `base_seed`.
pub fn trial_rng(base_seed: u64, trial: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    rng
}
