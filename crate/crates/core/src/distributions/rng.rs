use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Deterministic 64-bit generator used for every random draw in the crate.
///
/// The state is xoshiro256++ seeded by expanding the 64-bit seed with
/// SplitMix64. Uniform reals take the top 53 bits of one output, so a stream
/// is reproducible in any language that implements the same two generators.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    draws: u64,
    inner: Xoshiro256PlusPlus,
}

impl SeededRng {
    /// Identifier recorded in model artifacts and reports.
    pub const ALGORITHM: &'static str = "xoshiro256++ (splitmix64 seed expansion)";

    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            draws: 0,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit outputs consumed so far.
    pub fn position(&self) -> u64 {
        self.draws
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `0..bound`; `bound` must be positive.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Lemire's multiply-shift; bias is below 2^-64 * bound.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// An independent generator for sub-task `index` (trial, stream, ...).
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        SeededRng::new(z ^ (z >> 31))
    }
}
