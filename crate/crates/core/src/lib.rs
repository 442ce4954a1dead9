//! Frequency fitness assignment lab: bit-string and job shop benchmarks,
//! the (1+1)-EA>0 / (1+1)-FEA>0 pair, memetic job shop solvers, objective
//! transformations and runtime statistics.

pub mod batch;
pub mod bitstring;
pub mod error;
pub mod ffa;
pub mod jssp;
pub mod maxsat;
pub mod md5;
pub mod mutation;
pub mod problems;
pub mod rng;
pub mod solvers;
pub mod stats;
pub mod wmodel;

pub use bitstring::BitString;
pub use error::{Error, Result};
pub use ffa::{FrequencyTable, HashedFrequencyTable, TieRule, Transform};
pub use jssp::{JsspInstance, OpSeq};
pub use maxsat::{CnfFormula, MaxSat};
pub use problems::{Benchmark, BenchmarkKind, Objective};
pub use rng::RngState;
pub use solvers::{Algorithm, RunConfig, RunOutcome, RunTrace, Status};
pub use wmodel::{WModel, WModelParams};
