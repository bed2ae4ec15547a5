//! Seeded random streams.
//!
//! Every run owns a ChaCha8 generator keyed by a 64-bit seed. Independent
//! streams of the same key separate initialization from dynamics, and
//! [`derive_seed`] gives each (cell, replicate) work item of a sweep its own
//! key.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used to draw the initial configuration.
pub const INIT_STREAM: u64 = 0;
/// Stream used by the update dynamics.
pub const DYNAMICS_STREAM: u64 = 1;

/// Generator for `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed for replicate `rep` of sweep cell `cell`.
pub fn derive_seed(base: u64, cell: u64, rep: u64) -> u64 {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&base.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    key[16..24].copy_from_slice(&rep.to_le_bytes());
    ChaCha8Rng::from_seed(key).next_u64()
}
