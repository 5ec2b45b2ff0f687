//! Detects statistically significant behavioural differences between two
//! process-variant event logs, expressed as Declare rules.
//!
//! The pipeline reads two logs ([`log_io`]), discovers or loads a Declare
//! specification for each ([`discovery`]), keeps the rules whose measures
//! differ significantly under a permutation test ([`analyzer`]) and writes
//! them as ranked sentences ([`report`]).

pub mod analyzer;
pub mod cli;
pub mod declare;
pub mod discovery;
pub mod error;
pub mod exec;
pub mod log_io;
pub mod report;
pub mod synthetic;

pub use error::{Error, Result};
pub use exec::Execution;
