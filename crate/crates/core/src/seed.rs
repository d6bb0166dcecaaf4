//! Seed derivation for reproducible, order-independent sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives a per-item seed from a master seed and a stable key (usually an id).
///
/// Results depend only on `(master, key)`, so items can be processed in any
/// order or in parallel without changing their random draws.
pub fn substream(master: u64, key: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update([0u8]);
    hasher.update(key.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_differ_by_key_and_master() {
        assert_eq!(substream(1, "a"), substream(1, "a"));
        assert_ne!(substream(1, "a"), substream(1, "b"));
        assert_ne!(substream(1, "a"), substream(2, "a"));
    }
}
