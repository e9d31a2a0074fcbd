//! Seeded randomness shared by every sampled run.
//!
//! The stream is ChaCha20 seeded through `SeedableRng::seed_from_u64`. Bits
//! are the low bit of `next_u32`; uniform reals use the top 53 bits of
//! `next_u64`. Both rules are fixed here so transcripts can be regenerated
//! by any implementation of the same generator.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Identifier recorded in every report that depends on sampling.
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64";

pub struct SeededRng(ChaCha20Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    pub fn bit(&mut self) -> u8 {
        (self.0.next_u32() & 1) as u8
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub(crate) fn inner(&mut self) -> &mut ChaCha20Rng {
        &mut self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(11);
        let mut b = SeededRng::new(11);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn unit_is_in_range() {
        let mut r = SeededRng::new(3);
        for _ in 0..1000 {
            let u = r.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
