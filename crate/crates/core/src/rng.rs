//! Seeded random stream shared by scenario generation and planning.
//!
//! The generator is xoroshiro128++ whose 128-bit state is filled from the
//! 64-bit seed by two successive splitmix64 outputs. Floats in `[0, 1)` take
//! the top 53 bits of one draw: `(x >> 11) * 2^-53`. Any implementation that
//! follows these three rules reproduces the same sequences.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoroshiro128PlusPlus;

#[derive(Debug, Clone)]
pub struct RngStream {
    inner: Xoroshiro128PlusPlus,
    seed: u64,
    draw_count: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoroshiro128PlusPlus::seed_from_u64(seed),
            seed,
            draw_count: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn draw_count(&self) -> u64 {
        self.draw_count
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draw_count += 1;
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`; returns `lo` when the interval is empty.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
