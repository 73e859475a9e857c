//! Seeded randomness.
//!
//! All generation uses ChaCha8. A dataset is driven by one master seed; the
//! instance at position `i` of the expanded grid gets its own seed drawn from
//! ChaCha8 stream `i` of the master key, so instances can be produced in any
//! order or in parallel and still regenerate identically.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for child stream `index` of `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn fair_coin(rng: &mut impl Rng) -> bool {
    rng.random_bool(0.5)
}
