//! Seed derivation for reproducible experiments.
//!
//! Every random quantity (target coefficients, spectrum shifts, train/test
//! splits) is drawn from its own ChaCha8 stream. ChaCha is a counter-based
//! generator, so a stream is fully determined by its 64-bit seed; seeds are
//! derived from a master seed, a purpose label and a list of indices. Results
//! therefore do not depend on the order in which runs are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `(master, purpose, indices)`.
pub fn derive_seed(master: u64, purpose: &str, indices: &[u64]) -> u64 {
    // FNV-1a over the label keeps distinct purposes on distinct streams.
    let mut label: u64 = 0xCBF2_9CE4_8422_2325;
    for byte in purpose.bytes() {
        label ^= u64::from(byte);
        label = label.wrapping_mul(0x0000_0100_0000_01B3);
    }
    let mut h = splitmix64(master ^ splitmix64(label));
    for &i in indices {
        h = splitmix64(h ^ splitmix64(i.wrapping_add(0x5851_F42D_4C95_7F2D)));
    }
    h
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}
