//! Seed discipline. A config carries one 64-bit seed; every consumer draws
//! from its own ChaCha stream, keyed by a fixed label, so adding a consumer
//! never perturbs the draws seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream for `label` under the master `seed`.
pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Sub-stream `index` of `label`, for per-trial or per-run generators.
pub fn substream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(fnv1a(label));
    rng
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}
