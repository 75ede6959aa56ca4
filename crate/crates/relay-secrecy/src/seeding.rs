//! Deterministic stream splitting for Monte Carlo workers.
//!
//! Every (trial, slot) pair owns an independent generator derived from the
//! master seed by a fixed 64-bit mix, so trials can run on any worker in
//! any order and still reproduce bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 finalizer step.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes the master seed with a trial index.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(trial.wrapping_add(1)))
}

/// Mixes the master seed with a (trial, slot) pair.
pub fn slot_seed(seed: u64, trial: u64, slot: u64) -> u64 {
    splitmix64(trial_seed(seed, trial) ^ splitmix64(slot.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Generator for one (trial, slot) work unit.
pub fn slot_rng(seed: u64, trial: u64, slot: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(slot_seed(seed, trial, slot))
}

/// Generator for trial-level decisions that are not tied to a slot.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(trial_seed(seed, trial))
}
