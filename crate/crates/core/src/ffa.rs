//! Frequency fitness assignment: encounter-count tables, the selection
//! rule, and bijective transformations of the objective codomain.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::md5::md5;
use crate::problems::Objective;
use crate::rng::RngState;

/// Acceptance on equal frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum TieRule {
    /// accept the new solution when `H[new] <= H[cur]`
    #[default]
    Le,
    /// accept only when `H[new] < H[cur]`
    Lt,
}

impl TieRule {
    #[inline]
    pub fn accepts<T: PartialOrd>(self, new: T, current: T) -> bool {
        match self {
            TieRule::Le => new <= current,
            TieRule::Lt => new < current,
        }
    }
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieRule::Le => "le",
            TieRule::Lt => "lt",
        })
    }
}

impl std::str::FromStr for TieRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "le" => Ok(TieRule::Le),
            "lt" => Ok(TieRule::Lt),
            _ => Err(Error::Transform(format!("unknown tie rule {s:?}, expected le or lt"))),
        }
    }
}

/// Dense counters `H[0..=ub]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u64>,
}

impl FrequencyTable {
    pub fn new(upper_bound: u64) -> Self {
        FrequencyTable {
            counts: vec![0; upper_bound as usize + 1],
        }
    }

    pub fn upper_bound(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// Panics if `y` exceeds the upper bound.
    #[inline]
    pub fn get(&self, y: u64) -> u64 {
        self.counts[y as usize]
    }

    #[inline]
    pub fn tick(&mut self, y: u64) {
        self.counts[y as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Increments both entries, then compares them.
    #[inline]
    pub fn tick_and_compare(&mut self, current: u64, new: u64, tie: TieRule) -> bool {
        self.tick(current);
        self.tick(new);
        tie.accepts(self.get(new), self.get(current))
    }
}

/// Sparse counters for keys without a small dense range; missing keys count 0.
#[derive(Debug, Clone)]
pub struct HashedFrequencyTable<K> {
    counts: HashMap<K, u64>,
}

impl<K: Hash + Eq + Clone> Default for HashedFrequencyTable<K> {
    fn default() -> Self {
        HashedFrequencyTable { counts: HashMap::new() }
    }
}

impl<K: Hash + Eq + Clone> HashedFrequencyTable<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn tick(&mut self, key: &K) -> u64 {
        let c = self.counts.entry(key.clone()).or_insert(0);
        *c += 1;
        *c
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn distinct_keys(&self) -> usize {
        self.counts.len()
    }

    pub fn tick_and_compare(&mut self, current: &K, new: &K, tie: TieRule) -> bool {
        self.tick(current);
        self.tick(new);
        tie.accepts(self.get(new), self.get(current))
    }
}

/// A bijection of the objective codomain, as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    Identity,
    /// `a * y + b`, `a > 0`
    Affine {
        a: u64,
        b: u64,
    },
    /// `UB - y`
    Negation,
    /// a uniformly random permutation of `0..=UB` drawn from `seed`
    Permutation {
        seed: u64,
    },
    /// an explicit table over `0..=UB`
    Table(Vec<u64>),
    /// MD5 of the 8-byte big-endian encoding of `y`
    Md5,
}

impl Transform {
    /// Resolves the transform against a concrete upper bound.
    pub fn compile(&self, ub: u64) -> Result<ValueMap> {
        Ok(match self {
            Transform::Identity => ValueMap::Identity { ub },
            Transform::Affine { a, b } => {
                if *a == 0 {
                    return Err(Error::param("a", 0, "affine slope must be positive"));
                }
                a.checked_mul(ub)
                    .and_then(|v| v.checked_add(*b))
                    .ok_or_else(|| Error::Transform(format!("affine image of {ub} overflows 64 bits")))?;
                ValueMap::Affine { a: *a, b: *b, ub }
            }
            Transform::Negation => ValueMap::Negation { ub },
            Transform::Permutation { seed } => {
                let mut table: Vec<u64> = (0..=ub).collect();
                RngState::from_seed(*seed).shuffle(&mut table);
                ValueMap::Table(table)
            }
            Transform::Table(table) => {
                if table.len() as u64 != ub + 1 {
                    return Err(Error::PermutationSize {
                        expected: ub as usize + 1,
                        found: table.len(),
                    });
                }
                let mut seen = vec![false; table.len()];
                for &v in table {
                    if v > ub || std::mem::replace(&mut seen[v as usize], true) {
                        return Err(Error::NotAPermutation(ub));
                    }
                }
                ValueMap::Table(table.clone())
            }
            Transform::Md5 => ValueMap::Md5,
        })
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => f.write_str("identity"),
            Transform::Affine { a, b } => write!(f, "affine:a={a},b={b}"),
            Transform::Negation => f.write_str("neg"),
            Transform::Permutation { seed } => write!(f, "perm:seed={seed}"),
            Transform::Table(_) => f.write_str("table"),
            Transform::Md5 => f.write_str("md5"),
        }
    }
}

/// Transformed objective value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fitness {
    Int(u64),
    Digest([u8; 16]),
}

/// A transform bound to an upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueMap {
    Identity { ub: u64 },
    Affine { a: u64, b: u64, ub: u64 },
    Negation { ub: u64 },
    Table(Vec<u64>),
    Md5,
}

/// Largest transformed value for which a dense table is allocated.
const DENSE_LIMIT: u64 = 1 << 24;

impl ValueMap {
    pub fn apply(&self, y: u64) -> Fitness {
        match self {
            ValueMap::Md5 => Fitness::Digest(md5(&y.to_be_bytes())),
            _ => Fitness::Int(self.apply_int(y)),
        }
    }

    #[inline]
    fn apply_int(&self, y: u64) -> u64 {
        match self {
            ValueMap::Identity { .. } => y,
            ValueMap::Affine { a, b, .. } => a * y + b,
            ValueMap::Negation { ub } => ub - y,
            ValueMap::Table(t) => t[y as usize],
            ValueMap::Md5 => unreachable!("digest transform has no integer image"),
        }
    }

    /// Largest integer image, or `None` for digests.
    fn image_bound(&self) -> Option<u64> {
        match self {
            ValueMap::Identity { ub } | ValueMap::Negation { ub } => Some(*ub),
            ValueMap::Affine { a, b, ub } => Some(a * ub + b),
            ValueMap::Table(t) => Some(t.len() as u64 - 1),
            ValueMap::Md5 => None,
        }
    }
}

/// `g(f(x))` for a problem `f` and a transform `g`.
#[derive(Debug, Clone)]
pub struct WrappedObjective<P> {
    problem: P,
    map: ValueMap,
}

pub fn wrap_objective<P: Objective>(problem: P, transform: &Transform) -> Result<WrappedObjective<P>> {
    let map = transform.compile(problem.upper_bound())?;
    Ok(WrappedObjective { problem, map })
}

impl<P: Objective> WrappedObjective<P> {
    pub fn problem(&self) -> &P {
        &self.problem
    }

    pub fn value_map(&self) -> &ValueMap {
        &self.map
    }

    /// Raw and transformed value of `x`.
    pub fn evaluate(&self, x: &BitString) -> (u64, Fitness) {
        let raw = self.problem.evaluate(x);
        (raw, self.map.apply(raw))
    }
}

enum Counters {
    Dense(FrequencyTable),
    Sparse(HashedFrequencyTable<u64>),
    Digest {
        table: HashedFrequencyTable<[u8; 16]>,
        memo: HashMap<u64, [u8; 16]>,
        owner: HashMap<[u8; 16], u64>,
    },
}

/// Frequency table plus transform, fed with raw objective values.
///
/// The table variant follows the codomain: dense counters for integer
/// images up to 2^24, hashed counters beyond, and a digest-keyed table for
/// MD5. Digests are memoized per raw value; two raw values with the same
/// digest abort with [`Error::DigestCollision`].
pub struct FfaSelector {
    map: ValueMap,
    counters: Counters,
    tie: TieRule,
}

impl FfaSelector {
    pub fn new(map: ValueMap, tie: TieRule) -> Self {
        let counters = match map.image_bound() {
            Some(bound) if bound <= DENSE_LIMIT => Counters::Dense(FrequencyTable::new(bound)),
            Some(_) => Counters::Sparse(HashedFrequencyTable::new()),
            None => Counters::Digest {
                table: HashedFrequencyTable::new(),
                memo: HashMap::new(),
                owner: HashMap::new(),
            },
        };
        FfaSelector { map, counters, tie }
    }

    /// Counts both raw values under the transform; `Ok(true)` accepts `new`.
    #[inline]
    pub fn tick_and_compare(&mut self, current: u64, new: u64) -> Result<bool> {
        match &mut self.counters {
            Counters::Dense(t) => {
                let (c, n) = (self.map.apply_int(current), self.map.apply_int(new));
                Ok(t.tick_and_compare(c, n, self.tie))
            }
            Counters::Sparse(t) => {
                let (c, n) = (self.map.apply_int(current), self.map.apply_int(new));
                Ok(t.tick_and_compare(&c, &n, self.tie))
            }
            Counters::Digest { table, memo, owner } => {
                let c = digest_of(memo, owner, current)?;
                let n = digest_of(memo, owner, new)?;
                Ok(table.tick_and_compare(&c, &n, self.tie))
            }
        }
    }

    /// Sum of all counters.
    pub fn total(&self) -> u64 {
        match &self.counters {
            Counters::Dense(t) => t.total(),
            Counters::Sparse(t) => t.total(),
            Counters::Digest { table, .. } => table.total(),
        }
    }

    /// Counter of the transformed image of raw value `y`.
    pub fn count(&self, y: u64) -> u64 {
        match (&self.counters, self.map.apply(y)) {
            (Counters::Dense(t), Fitness::Int(v)) => t.get(v),
            (Counters::Sparse(t), Fitness::Int(v)) => t.get(&v),
            (Counters::Digest { table, .. }, Fitness::Digest(d)) => table.get(&d),
            _ => unreachable!("table variant follows the value map"),
        }
    }
}

fn digest_of(memo: &mut HashMap<u64, [u8; 16]>, owner: &mut HashMap<[u8; 16], u64>, y: u64) -> Result<[u8; 16]> {
    if let Some(d) = memo.get(&y) {
        return Ok(*d);
    }
    let d = md5(&y.to_be_bytes());
    if let Some(&other) = owner.get(&d) {
        return Err(Error::DigestCollision(other, y));
    }
    memo.insert(y, d);
    owner.insert(d, y);
    Ok(d)
}
