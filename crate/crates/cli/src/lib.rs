//! Experiment driver for the `navier-mild` solver: initial data, TOML
//! configuration, trajectory files, reports and the acceptance suite.

pub mod acceptance;
pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod report;
pub mod trajfile;

pub use config::ExperimentConfig;
pub use error::HarnessError;
pub use experiment::{run_experiment, ExperimentOutcome};
