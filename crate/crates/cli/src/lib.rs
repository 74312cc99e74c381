//! Configuration and orchestration behind the `linresp` command.
//!
//! A run reads one TOML file ([`config::RunConfig`]), builds the lattice
//! model, prepares the excited state, computes the exact phase-estimation
//! distribution and samples it, then optionally measures momentum
//! occupations on collapsed final states.

pub mod config;
pub mod error;
pub mod pipeline;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
