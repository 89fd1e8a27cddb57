//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 generator seeded with
//! `derive_seed(base, stream, index)`. Streams separate independent uses of a
//! base seed (replicates, envelope simulations), and the index selects a
//! substream within one use, so work can be scheduled on any number of
//! threads without changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tag for per-replicate data generation.
pub const STREAM_REPLICATE: u64 = 0x5245_504c;
/// Stream tag for the seed of a scenario's null envelope.
pub const STREAM_ENVELOPE: u64 = 0x454e_5645;
/// Stream tag for the individual simulations within one envelope.
pub const STREAM_NULL_SIM: u64 = 0x4e55_4c4c;

// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    mix(mix(mix(base) ^ stream) ^ index)
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(base: u64, stream: u64, index: u64) -> Rng {
    rng_from_seed(derive_seed(base, stream, index))
}
