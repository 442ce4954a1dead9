//! Seeded random number generation.
//!
//! Every run owns one [`RngState`]. The generator is PCG-64 MCG
//! (`Mcg128Xsl64`, 128-bit multiplicative congruential state with an
//! XSL-RR 64-bit output), seeded from a single `u64` through
//! `rand_core`'s `seed_from_u64` expansion. All derived samples
//! (bounded integers, coins, unit floats) are computed here from raw
//! 64-bit outputs so that streams are identical on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_pcg::Pcg64Mcg;

use crate::bitstring::BitString;
use crate::error::Result;

/// Name written to log headers.
pub const RNG_NAME: &str = "pcg64mcg";

#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    inner: Pcg64Mcg,
}

impl RngState {
    pub fn from_seed(seed: u64) -> Self {
        RngState {
            seed,
            inner: Pcg64Mcg::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-and-reject method).
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_u64() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    #[inline]
    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Fisher-Yates shuffle driven by [`RngState::below`].
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

/// Uniformly random bit string of length `s`, one 64-bit draw per word.
pub fn random_bitstring(rng: &mut RngState, s: usize) -> Result<BitString> {
    let mut x = BitString::zeros(s)?;
    for w in x.words_mut() {
        *w = rng.next_u64();
    }
    x.clear_tail();
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngState::from_seed(42);
        let mut b = RngState::from_seed(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = RngState::from_seed(43);
        assert_ne!(RngState::from_seed(42).next_u64(), c.next_u64());
    }

    #[test]
    fn random_bitstring_rejects_zero_dimension() {
        let mut rng = RngState::from_seed(1);
        assert_eq!(random_bitstring(&mut rng, 0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn random_bitstring_single_bit_and_determinism() {
        let mut rng = RngState::from_seed(5);
        let x = random_bitstring(&mut rng, 1).unwrap();
        assert_eq!(x.len(), 1);
        assert!(x.count_ones() <= 1);
        let a = random_bitstring(&mut RngState::from_seed(9), 32).unwrap();
        let b = random_bitstring(&mut RngState::from_seed(9), 32).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bit_mean_is_one_half() {
        let mut rng = RngState::from_seed(2024);
        let draws = 100_000;
        let ones: usize = (0..draws)
            .map(|_| random_bitstring(&mut rng, 64).unwrap().count_ones())
            .sum();
        let mean = ones as f64 / (draws * 64) as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn below_is_uniform_enough() {
        let mut rng = RngState::from_seed(3);
        let mut counts = [0u32; 7];
        for _ in 0..70_000 {
            counts[rng.index(7)] += 1;
        }
        for c in counts {
            assert!((9_500..10_500).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn unit_f64_range() {
        let mut rng = RngState::from_seed(11);
        for _ in 0..10_000 {
            let u = rng.unit_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
