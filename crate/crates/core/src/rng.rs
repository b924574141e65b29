//! Seeded random source.
//!
//! Every sampler in the crate draws from an explicit [`RandomSource`], so a
//! `(seed, call sequence)` pair fully determines the output. Parallel chains
//! should split child streams up front with [`RandomSource::split`].

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    inner: ChaCha20Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Seed this source was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Deterministically derive an independent child stream.
    ///
    /// The child's seed is drawn from the parent, so splitting advances the
    /// parent by one `u64`.
    pub fn split(&mut self) -> RandomSource {
        let child_seed = self.inner.next_u64();
        RandomSource::new(child_seed)
    }

    /// `n` child streams, in order.
    pub fn split_n(&mut self, n: usize) -> Vec<RandomSource> {
        (0..n).map(|_| self.split()).collect()
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        loop {
            // 53 random mantissa bits
            let u = (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
