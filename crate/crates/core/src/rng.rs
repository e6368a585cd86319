//! Seed derivation.
//!
//! Every randomized routine takes a 64-bit seed and derives independent
//! sub-seeds per trial, per query, per call. Work split across threads therefore
//! sees the same random stream regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type LabRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `stream` into `seed`; distinct streams give unrelated seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn rng_from_seed(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for sub-task `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> LabRng {
    rng_from_seed(derive_seed(seed, stream))
}
