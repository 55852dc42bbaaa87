//! Batch runner for the orbispec experiments: configuration, the
//! experiment registry and report writing.

pub mod config;
pub mod experiments;
pub mod registry;
pub mod report;
pub mod runner;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{ExperimentConfig, ExperimentSpec};
pub use report::{Check, Outcome, Report, Summary, Verdict};
pub use runner::{run, RunOptions, RunResult};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}", .0.display())]
    Io(PathBuf, #[source] std::io::Error),
    #[error("invalid filter: {0}")]
    Filter(String),
    #[error("thread pool: {0}")]
    Pool(String),
}
