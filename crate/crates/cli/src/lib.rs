//! Command-line front end for the ffalab experiments: problem specs, run
//! logs, and the `run`, `suite`, `verify-invariance`, `stats` and `gen-cnf`
//! subcommands.

pub mod commands;
pub mod error;
pub mod log;
pub mod spec;

pub use error::CliError;
