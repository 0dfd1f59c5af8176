//! Experiment runner, result files and CLI support for `shadowlink-core`.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::ExperimentConfig;
pub use experiment::{run_experiment, SweepRow};
