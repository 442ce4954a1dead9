//! Closed-form pseudo-Boolean benchmarks, all in minimization form with
//! optimum value 0.

use std::fmt;

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// An integer-valued objective over bit strings, subject to minimization.
///
/// Implementations guarantee `evaluate(x) <= upper_bound()` for every `x`
/// of length `dimension()` and that some `x` attains 0.
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;
    fn upper_bound(&self) -> u64;
    fn evaluate(&self, x: &BitString) -> u64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn upper_bound(&self) -> u64 {
        (**self).upper_bound()
    }
    fn evaluate(&self, x: &BitString) -> u64 {
        (**self).evaluate(x)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn upper_bound(&self) -> u64 {
        (**self).upper_bound()
    }
    fn evaluate(&self, x: &BitString) -> u64 {
        (**self).evaluate(x)
    }
}

/// `s - |x|_1`
pub fn onemax(x: &BitString) -> u64 {
    (x.len() - x.count_ones()) as u64
}

/// `s` minus the length of the all-ones prefix.
pub fn leadingones(x: &BitString) -> u64 {
    (x.len() - x.leading_ones()) as u64
}

pub fn twomax(x: &BitString) -> u64 {
    let s = x.len();
    let ones = x.count_ones();
    if ones == s {
        0
    } else {
        (1 + s - ones.max(s - ones)) as u64
    }
}

/// Jump with deceptive gap of width `k` in front of the optimum.
pub fn jump(x: &BitString, k: usize) -> u64 {
    let s = x.len();
    let ones = x.count_ones();
    if ones == s || ones + k <= s {
        (s - ones) as u64
    } else {
        (k + ones) as u64
    }
}

pub fn trap(x: &BitString) -> u64 {
    let ones = x.count_ones();
    if ones == 0 {
        0
    } else {
        (x.len() - ones + 1) as u64
    }
}

/// Plateau of width `k`: every string in the gap scores the constant `k`.
pub fn plateau(x: &BitString, k: usize) -> u64 {
    let s = x.len();
    let ones = x.count_ones();
    if ones == s || ones + k <= s {
        (s - ones) as u64
    } else {
        k as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkKind {
    OneMax,
    LeadingOnes,
    TwoMax,
    Jump { k: usize },
    Trap,
    Plateau { k: usize },
}

/// One of the six closed-form benchmarks at a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Benchmark {
    kind: BenchmarkKind,
    dimension: usize,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if let BenchmarkKind::Jump { k } | BenchmarkKind::Plateau { k } = kind {
            if k < 2 || k + 1 > dimension {
                return Err(Error::param(
                    "k",
                    k,
                    format!("need 2 <= k <= s-1 = {}", dimension as i64 - 1),
                ));
            }
        }
        Ok(Benchmark { kind, dimension })
    }

    pub fn onemax(s: usize) -> Result<Self> {
        Self::new(BenchmarkKind::OneMax, s)
    }
    pub fn leadingones(s: usize) -> Result<Self> {
        Self::new(BenchmarkKind::LeadingOnes, s)
    }
    pub fn twomax(s: usize) -> Result<Self> {
        Self::new(BenchmarkKind::TwoMax, s)
    }
    pub fn jump(s: usize, k: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Jump { k }, s)
    }
    pub fn trap(s: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Trap, s)
    }
    pub fn plateau(s: usize, k: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Plateau { k }, s)
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }
}

impl Objective for Benchmark {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn upper_bound(&self) -> u64 {
        let s = self.dimension as u64;
        match self.kind {
            BenchmarkKind::OneMax | BenchmarkKind::LeadingOnes | BenchmarkKind::Trap => s,
            BenchmarkKind::TwoMax => 1 + s / 2,
            BenchmarkKind::Jump { k } => s + k as u64 - 1,
            BenchmarkKind::Plateau { .. } => s,
        }
    }

    #[inline]
    fn evaluate(&self, x: &BitString) -> u64 {
        debug_assert_eq!(x.len(), self.dimension);
        match self.kind {
            BenchmarkKind::OneMax => onemax(x),
            BenchmarkKind::LeadingOnes => leadingones(x),
            BenchmarkKind::TwoMax => twomax(x),
            BenchmarkKind::Jump { k } => jump(x, k),
            BenchmarkKind::Trap => trap(x),
            BenchmarkKind::Plateau { k } => plateau(x, k),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.dimension;
        match self.kind {
            BenchmarkKind::OneMax => write!(f, "onemax:s={s}"),
            BenchmarkKind::LeadingOnes => write!(f, "leadingones:s={s}"),
            BenchmarkKind::TwoMax => write!(f, "twomax:s={s}"),
            BenchmarkKind::Jump { k } => write!(f, "jump:s={s},k={k}"),
            BenchmarkKind::Trap => write!(f, "trap:s={s}"),
            BenchmarkKind::Plateau { k } => write!(f, "plateau:s={s},k={k}"),
        }
    }
}
