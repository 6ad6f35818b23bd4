//! Seeding conventions.
//!
//! Every random stream is a [`ChaCha8Rng`]. Streams are addressed by a 64-bit
//! seed plus a stream index, so instance generation and individual annealing
//! runs can be reproduced independently of execution order:
//!
//! - instance generation uses `stream(seed, GENERATION_STREAM)`;
//! - annealing run `r` of a solve uses `stream(seed, r)`;
//! - batch seeds are derived from a master seed with [`derive_seed`], a
//!   SplitMix64 chain over `(master, tags...)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream index reserved for instance generation.
pub const GENERATION_STREAM: u64 = u64::MAX;

/// One SplitMix64 output step.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based child seed: hashes the master seed with each tag in turn.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(master), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
