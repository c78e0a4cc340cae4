//! Config-driven verification harness for the product laws in `cevm-core`.
//!
//! A config names a zoo model, a sample size and seed, evaluation grids and
//! tolerances. [`experiment::run`] turns it into a [`VerificationReport`]
//! whose rows compare estimates with the predicted index and constants.

pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod samples;
pub mod suite;

pub use config::{ExperimentConfig, KPolicy, Tolerances};
pub use error::{CliError, Result};
pub use report::{Row, Verdict, VerificationReport};
