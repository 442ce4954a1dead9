//! The W-Model: a tunable bit-string benchmark built from a base problem
//! (Hamming distance to the alternating string `0101...`) and three
//! optional layers for neutrality, epistasis and ruggedness.
//!
//! The layer definitions follow the published reference implementation of
//! the model, including its corrected ruggedness permutation.

use std::fmt;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::problems::Objective;

/// How a neutrality block with equally many zeros and ones collapses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorityTie {
    Zero,
    One,
}

/// Tie rule used by [`WModel`] unless configured otherwise.
pub const DEFAULT_TIE: MajorityTie = MajorityTie::One;

/// The 19 instances `(n, m, nu, gamma)` of the standard W-Model selection,
/// indexed by `id - 1`.
pub const CATALOG: [(usize, usize, usize, u64); 19] = [
    (10, 2, 6, 10),
    (10, 2, 6, 18),
    (16, 1, 5, 72),
    (16, 3, 9, 72),
    (25, 1, 23, 90),
    (32, 1, 2, 397),
    (32, 4, 11, 0),
    (32, 4, 14, 0),
    (32, 4, 8, 128),
    (50, 1, 36, 245),
    (50, 2, 21, 256),
    (50, 3, 16, 613),
    (64, 2, 32, 256),
    (64, 3, 21, 16),
    (64, 3, 21, 256),
    (64, 3, 21, 403),
    (64, 4, 52, 2),
    (75, 1, 60, 16),
    (75, 2, 32, 4),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WModelParams {
    pub n: usize,
    pub m: usize,
    pub nu: usize,
    pub gamma: u64,
}

impl WModelParams {
    pub fn catalog(id: usize) -> Result<Self> {
        let &(n, m, nu, gamma) = id
            .checked_sub(1)
            .and_then(|i| CATALOG.get(i))
            .ok_or_else(|| Error::param("id", id, "catalog ids are 1..=19"))?;
        Ok(WModelParams { n, m, nu, gamma })
    }

    /// Search-space dimension `m * n`.
    pub fn dimension(&self) -> usize {
        self.m * self.n
    }

    /// Epistasis blocks of size two or less leave the string unchanged.
    pub fn epistasis_enabled(&self) -> bool {
        self.nu > 2
    }
}

/// Hamming distance to the alternating target `0101...` (bit 0 is `0`).
pub fn base_objective(x: &[bool]) -> u64 {
    x.iter().enumerate().filter(|&(i, &b)| b == (i % 2 == 0)).count() as u64
}

/// Collapses every block of `m` consecutive bits to its majority bit.
pub fn neutrality_reduce(x: &[bool], m: usize, tie: MajorityTie) -> Vec<bool> {
    assert!(m >= 1, "neutrality factor must be positive");
    x.chunks_exact(m)
        .map(|block| {
            let ones = block.iter().filter(|&&b| b).count();
            let zeros = m - ones;
            match ones.cmp(&zeros) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => tie == MajorityTie::One,
            }
        })
        .collect()
}

/// The bijective block map: the last output bit is the parity of the
/// block, every other output bit `i` is the parity with input bit `i + 1`
/// left out.
fn epistasis_block(input: &[bool], out: &mut [bool]) {
    let nu = input.len();
    let end = nu - 1;
    let flip = input[0];
    let mut skip = 0usize;
    for i in (0..nu).rev() {
        let mut result = flip;
        for j in (1..=end).rev() {
            if j != skip {
                result ^= input[j];
            }
        }
        out[i] = result;
        skip = if skip == 0 { end } else { skip - 1 };
    }
}

/// Applies the epistasis block map to consecutive blocks of `nu` bits; a
/// shorter trailing block uses the map of its own length.
pub fn epistasis_map(x: &[bool], nu: usize) -> Vec<bool> {
    assert!(nu >= 1, "block size must be positive");
    let mut out = vec![false; x.len()];
    for (inp, o) in x.chunks(nu).zip(out.chunks_mut(nu)) {
        epistasis_block(inp, o);
    }
    out
}

pub fn max_gamma(n: usize) -> u64 {
    (n as u64 * (n as u64).saturating_sub(1)) / 2
}

/// Reorders ruggedness levels so that rising `gamma` first yields
/// increasingly rugged and afterwards increasingly deceptive permutations.
pub fn ruggedness_translate(gamma: u64, n: usize) -> u64 {
    if gamma == 0 {
        return 0;
    }
    let n_i = n as i64;
    let g = gamma as i64;
    let last_upper = (n_i >> 1) * ((n_i + 1) >> 1);
    if g <= last_upper {
        let j = ((n_i as f64 + 2.0) * 0.5 - ((n_i * n_i) as f64 * 0.25 + 1.0 - g as f64).sqrt()) as i64;
        let k = g - (n_i + 2) * j + j * j + n_i;
        return (k + 1 + (((n_i + 2) * j - j * j - n_i - 1) << 1) - (j - 1)) as u64;
    }
    let odd = n_i % 2;
    let j = ((odd + 1) as f64 * 0.5 + (((1 - odd) as f64 * 0.25) + g as f64 - 1.0 - last_upper as f64).sqrt()) as i64;
    let k = g - ((j - odd) * (j - 1) + 1 + last_upper);
    (max_gamma(n) as i64 - k - (2 * j * j - j) - odd * (-2 * j + 1)) as u64
}

/// Builds the raw ruggedness permutation of `0..=n` for a translated level.
pub fn ruggedness_table_raw(gamma_raw: u64, n: usize) -> Vec<u64> {
    let mut r: Vec<u64> = (0..=n as u64).collect();
    let n_i = n as i64;
    let g = gamma_raw as i64;
    let max = max_gamma(n) as i64;
    let start = if g <= 0 {
        0
    } else {
        n_i - 1 - (0.5 + (0.25 + ((max - g) << 1) as f64).sqrt()) as i64
    };
    let mut k = 0i64;
    let mut j = 1i64;
    while j <= start {
        if j & 1 != 0 {
            r[j as usize] = (n_i - k) as u64;
        } else {
            k += 1;
            r[j as usize] = k as u64;
        }
        j += 1;
    }
    while j <= n_i {
        k += 1;
        r[j as usize] = if start & 1 != 0 { n_i - k } else { k } as u64;
        j += 1;
    }
    let upper = (g - max) + (((n_i - start - 1) * (n_i - start)) >> 1);
    j -= 1;
    for _ in 0..upper.max(0) {
        j -= 1;
        r.swap(j as usize, n);
    }
    r
}

/// The ruggedness permutation for the user-facing parameter `gamma`.
pub fn ruggedness_table(gamma: u64, n: usize) -> Result<Vec<u64>> {
    if gamma > max_gamma(n) {
        return Err(Error::param(
            "gamma",
            gamma,
            format!("need gamma <= n(n-1)/2 = {}", max_gamma(n)),
        ));
    }
    Ok(ruggedness_table_raw(ruggedness_translate(gamma, n), n))
}

/// `r_gamma(v)`; builds the table on every call, so prefer [`WModel`] for
/// repeated evaluation.
pub fn ruggedness_permutation(v: u64, gamma: u64, n: usize) -> Result<u64> {
    if v > n as u64 {
        return Err(Error::param("v", v, format!("objective value outside 0..={n}")));
    }
    Ok(ruggedness_table(gamma, n)?[v as usize])
}

/// A W-Model instance with its ruggedness table precomputed.
#[derive(Debug, Clone)]
pub struct WModel {
    params: WModelParams,
    tie: MajorityTie,
    rugged: Vec<u64>,
    /// `0101...` packed, used when neither neutrality nor epistasis apply.
    target: BitString,
    label: Option<usize>,
}

impl WModel {
    pub fn new(params: WModelParams) -> Result<Self> {
        Self::with_tie(params, DEFAULT_TIE)
    }

    pub fn with_tie(params: WModelParams, tie: MajorityTie) -> Result<Self> {
        let WModelParams { n, m, nu, gamma } = params;
        if n < 2 {
            return Err(Error::param("n", n, "base length must be at least 2"));
        }
        if m < 1 {
            return Err(Error::param("m", m, "neutrality factor must be at least 1"));
        }
        if nu < 2 || nu > n {
            return Err(Error::param("nu", nu, format!("need 2 <= nu <= n = {n}")));
        }
        let rugged = ruggedness_table(gamma, n)?;
        let target = BitString::from_bits(&(0..n).map(|i| i % 2 == 1).collect::<Vec<_>>())?;
        Ok(WModel {
            params,
            tie,
            rugged,
            target,
            label: None,
        })
    }

    pub fn catalog(id: usize) -> Result<Self> {
        let mut w = Self::new(WModelParams::catalog(id)?)?;
        w.label = Some(id);
        Ok(w)
    }

    pub fn params(&self) -> WModelParams {
        self.params
    }

    pub fn tie(&self) -> MajorityTie {
        self.tie
    }

    /// Value of the base problem before the ruggedness permutation.
    pub fn base_value(&self, x: &BitString) -> u64 {
        let p = &self.params;
        if p.m == 1 && !p.epistasis_enabled() {
            return x.hamming(&self.target) as u64;
        }
        let bits = x.to_bits();
        let reduced = if p.m > 1 {
            neutrality_reduce(&bits, p.m, self.tie)
        } else {
            bits
        };
        if p.epistasis_enabled() {
            base_objective(&epistasis_map(&reduced, p.nu))
        } else {
            base_objective(&reduced)
        }
    }

    pub fn ruggedness(&self) -> &[u64] {
        &self.rugged
    }
}

impl Objective for WModel {
    fn dimension(&self) -> usize {
        self.params.dimension()
    }

    fn upper_bound(&self) -> u64 {
        self.params.n as u64
    }

    #[inline]
    fn evaluate(&self, x: &BitString) -> u64 {
        debug_assert_eq!(x.len(), self.dimension());
        self.rugged[self.base_value(x) as usize]
    }
}

impl fmt::Display for WModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(id) => write!(f, "wmodel:id={id}"),
            None => {
                let p = self.params;
                write!(f, "wmodel:n={},m={},nu={},gamma={}", p.n, p.m, p.nu, p.gamma)
            }
        }
    }
}
