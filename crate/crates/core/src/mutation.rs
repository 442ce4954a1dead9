//! Standard bit mutation conditioned on flipping at least one bit.
//!
//! Instead of resampling whole offspring until one differs from the parent,
//! the number of flipped bits `k` is drawn directly from
//! `Binomial(s, 1/s)` conditioned on `k >= 1` (inverse-CDF lookup with one
//! unit float), and then `k` distinct positions are drawn uniformly. The
//! resulting offspring distribution equals that of the rejection loop.

use crate::bitstring::BitString;
use crate::rng::RngState;

/// Precomputed flip-count distribution for one dimension.
#[derive(Clone, Debug)]
pub struct Mutator {
    dimension: usize,
    /// `cdf[i]` = P(K <= i + 1 | K >= 1); the last entry is exactly 1.
    cdf: Vec<f64>,
}

impl Mutator {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "mutation needs a nonempty bit string");
        Mutator {
            dimension,
            cdf: conditioned_flip_cdf(dimension),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Draws the number of bits to flip, always in `1..=dimension`.
    #[inline]
    pub fn sample_flip_count(&self, rng: &mut RngState) -> usize {
        if self.cdf.len() == 1 {
            return 1;
        }
        let u = rng.unit_f64();
        // partition_point: first index whose cdf exceeds u
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) + 1
    }

    /// Writes a mutated copy of `parent` into `child`.
    pub fn mutate_into(&self, rng: &mut RngState, parent: &BitString, child: &mut BitString) {
        debug_assert_eq!(parent.len(), self.dimension);
        child.clone_from(parent);
        let k = self.sample_flip_count(rng);
        let s = self.dimension;
        if k == 1 {
            child.flip(rng.index(s));
            return;
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        while chosen.len() < k {
            let pos = rng.index(s);
            if !chosen.contains(&pos) {
                chosen.push(pos);
                child.flip(pos);
            }
        }
    }

    pub fn mutate(&self, rng: &mut RngState, parent: &BitString) -> BitString {
        let mut child = parent.clone();
        self.mutate_into(rng, parent, &mut child);
        child
    }
}

/// One-shot convenience wrapper around [`Mutator`].
pub fn mutate_gt0(rng: &mut RngState, x: &BitString) -> BitString {
    Mutator::new(x.len()).mutate(rng, x)
}

fn conditioned_flip_cdf(s: usize) -> Vec<f64> {
    if s == 1 {
        return vec![1.0];
    }
    let p = 1.0 / s as f64;
    let q = 1.0 - p;
    let p0 = q.powi(s as i32);
    let norm = 1.0 - p0;
    let ratio = p / q;
    let mut cdf = Vec::with_capacity(s.min(64));
    let mut pmf = p0;
    let mut acc = 0.0;
    for k in 1..=s {
        pmf *= (s - k + 1) as f64 / k as f64 * ratio;
        acc += pmf / norm;
        if acc >= 1.0 || pmf / norm < 1e-18 {
            cdf.push(1.0);
            break;
        }
        cdf.push(acc);
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}
