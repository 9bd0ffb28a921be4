//! Deterministic derivation of independent random substreams.
//!
//! Experiment trials each get their own generator keyed by the master seed
//! and a path of indices, so results do not depend on execution order or on
//! how trials are scheduled across worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a generator keyed by `(master, path)`. The same key always yields
/// the same stream; distinct paths yield independent streams.
pub fn substream(master: u64, path: &[u64]) -> ChaCha8Rng {
    let mut h = mix(master ^ 0x9E37_79B9_7F4A_7C15);
    for &word in path {
        h = mix(h.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ mix(word ^ 0x2545_F491_4F6C_DD1D));
    }
    let mut seed = [0u8; 32];
    let mut s = h;
    for chunk in seed.chunks_exact_mut(8) {
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
        chunk.copy_from_slice(&mix(s).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
