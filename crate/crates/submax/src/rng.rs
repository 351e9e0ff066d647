//! Seed derivation and stateless uniform streams.
//!
//! Every randomized routine takes an explicit `u64` seed and derives
//! sub-streams with [`derive`], so batches can evaluate entries in any order
//! (or in parallel) and still replay bit-identically.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent stream seed from a parent seed and a tag.
pub fn derive(seed: u64, tag: u64) -> u64 {
    splitmix(splitmix(seed ^ tag.wrapping_mul(0xA24B_AED4_963E_E407)))
}

/// Derive with two tags (e.g. repetition and entry index).
pub fn derive2(seed: u64, a: u64, b: u64) -> u64 {
    derive(derive(seed, a), b)
}

/// Stateless uniform in `[0, 1)` keyed by `(seed, a, b)`.
pub fn unit(seed: u64, a: u64, b: u64) -> f64 {
    let bits = derive2(seed, a, b);
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded generator for the places that want a real RNG.
pub fn chacha(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
