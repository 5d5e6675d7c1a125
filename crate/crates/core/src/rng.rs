//! Deterministic random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by the
//! master seed, with the stream number derived from a path of indices
//! (experiment tag, grid cell, trajectory, ...). Results therefore do not depend
//! on thread count or scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags keeping unrelated draws apart.
pub mod tag {
    pub const FIDELITY_PARAMS: u64 = 1;
    pub const INIT: u64 = 2;
    pub const NOISY_EVAL: u64 = 3;
    pub const TRAJECTORY: u64 = 4;
    pub const SHIFT: u64 = 5;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a path of indices into one stream id.
pub fn derive_stream(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &x| splitmix64(acc ^ splitmix64(x)))
}

pub fn stream_rng(master_seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(derive_stream(path));
    rng
}
