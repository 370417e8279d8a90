//! Deterministic seed derivation.
//!
//! Every run owns one 64-bit master seed. Independent random streams are
//! derived from it by mixing a fixed context tag and the task's coordinates
//! (bits of precision, noise setting, member index, ...) through a
//! splitmix64-style hash. Streams therefore depend only on the task key,
//! never on execution order, which keeps parallel sweeps byte-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Context tags for the crate's derived streams.
pub mod tag {
    /// Ensemble generation for one precision.
    pub const ENSEMBLE: u64 = 0xE5;
    /// One circuit execution (tomography sampling).
    pub const CIRCUIT: u64 = 0xC1;
    /// Sub-ensemble D(m) sampling.
    pub const DM_CURVE: u64 = 0xD3;
    /// Sampling-contour cells.
    pub const CONTOUR: u64 = 0xC0;
}

/// Derive a child seed from a master seed and a task key.
pub fn derive(master: u64, parts: &[u64]) -> u64 {
    let mut state = mix(master ^ 0x9E37_79B9_7F4A_7C15);
    for &p in parts {
        state = mix(state ^ p);
    }
    state
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A generator on the given seed and stream id.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
