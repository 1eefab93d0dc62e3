//! Seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 generator keyed by a seed
//! derived from a parent seed and an index, so that replicate `b` of run
//! `seed` draws the same numbers no matter which thread runs it or in which
//! order replicates are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` of `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix(mix(parent).wrapping_add(0x9e37_79b9_7f4a_7c15_u64.wrapping_mul(index.wrapping_add(1))))
}

/// Generator for child stream `index` of `parent`.
pub fn child_rng(parent: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(parent, index))
}
