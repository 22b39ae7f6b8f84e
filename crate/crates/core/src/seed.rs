//! Seed derivation.
//!
//! A single global seed is expanded into per-stage seeds by mixing the seed
//! with a stage label and a counter through SplitMix64. Every stage can be
//! rerun in isolation from `(global seed, label, counter)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// FNV-1a over the label bytes; stable across platforms and releases.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

pub fn derive(seed: u64, label: &str, counter: u64) -> u64 {
    splitmix64(splitmix64(seed ^ label_hash(label)) ^ splitmix64(counter.wrapping_add(1)))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stage_rng(seed: u64, label: &str, counter: u64) -> Rng {
    rng(derive(seed, label, counter))
}
