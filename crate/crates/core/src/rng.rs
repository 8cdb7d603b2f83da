//! Seeded, portable random streams.
//!
//! Every random draw in the crate comes from ChaCha8 (`rand_chacha`), whose
//! output is specified bit for bit and does not depend on platform or word
//! size. Independent streams for replicates or grid cells are obtained by
//! mixing the base seed with the stream coordinates through SplitMix64.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate's generator.
pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives a child seed from `seed` and a sequence of stream coordinates.
pub fn derive_seed(seed: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(seed), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
