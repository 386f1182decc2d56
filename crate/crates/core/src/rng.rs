//! Portable random draws.
//!
//! Instance generation must be reproducible across platforms and crate
//! versions, so it does not go through `rand`'s distribution machinery
//! (whose sampling algorithms are allowed to change between releases).
//! Instead it reads raw 64-bit words from ChaCha20 and converts them with
//! the fixed rules below:
//!
//! * `unit_f64`: `(word >> 11) * 2^-53`, giving a value in `[0, 1)`.
//! * `below(m)`: rejection sampling on `word < floor(2^64 / m) * m`,
//!   then `word % m`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Name written into instance files so readers know how tables were drawn.
pub const INSTANCE_PRNG_NAME: &str = "chacha20-u64";

/// Deterministic word source for instance generation.
pub struct PortableRng {
    inner: ChaCha20Rng,
}

impl PortableRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, m)`. `m` must be positive.
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "below(0) is empty");
        let zone = (u64::MAX / m) * m;
        loop {
            let w = self.next_u64();
            if w < zone {
                return w % m;
            }
        }
    }
}

/// SplitMix64 finalizer. Used to derive independent stream seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a child seed from a parent seed and a stream tag.
pub fn derive_seed(parent: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ tag.wrapping_mul(0xd6e8_feb8_6659_fd93))
}
