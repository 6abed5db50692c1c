//! Batch driver: read curve files, sweep supersingular primes, cache
//! eigensymbols and write CSV / JSON / table reports.

pub mod cache;
pub mod config;
pub mod dump;
pub mod report;
pub mod selftest;
pub mod sweep;

use std::path::PathBuf;

use pmiwasawa::CurveError;
use thiserror::Error;

pub use config::{OutputFormat, RunConfig, DEFAULT_MAX_EVALS};
pub use report::{summarize, ResultRow, Summary};
pub use sweep::{run, run_curves, SweepOutcome};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ANOMALY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: CurveError },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}
