//! Deterministic random streams.
//!
//! Every consumer draws from a ChaCha8 generator keyed by a 64-bit seed and
//! switched to a stream number (a sample row, a bootstrap replicate, ...), so
//! work split across threads sees the same numbers in any schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Identifier recorded in artifacts; bump the suffix if the draw order changes.
pub const GENERATOR: &str = "chacha8-stream/v1";

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed derived from a root seed and a label.
pub fn child_seed(root: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(root.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
