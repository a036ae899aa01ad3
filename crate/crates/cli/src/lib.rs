//! Experiment harness for the Bernstein-Stancu operators: sweeps over corpus
//! fields and degrees, emitting CSV or JSON Lines tables.

pub mod config;
pub mod experiments;
pub mod record;

pub use config::{Experiment, Format, RunConfig};
pub use experiments::{run, BetaReport, CellFailure, LorentzRow, RunOutput, SweepOutput};
pub use record::ConvergenceRecord;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] bernstein_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 1 for configuration and output problems, 2 for
    /// numeric failures surfacing outside a sweep cell.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
