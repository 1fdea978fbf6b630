//! Experiment runner for the self-improving maxima engine: train models,
//! replay trials against the classical baselines, and summarize the CSV
//! output as tables and SVG charts.

pub mod commands;
pub mod report;
pub mod row;
pub mod svg;

use std::path::PathBuf;

use simax_core::{EngineError, GeometryError, LearningError, ScenarioError};
use thiserror::Error;

pub use commands::{
    load_model, resolve_scenario, run_trials, train_model, verify_trial, RunPlan, TrainPlan,
};
pub use report::{summarize, write_report, SummaryRow};
pub use row::{read_rows, write_rows, Algorithm, Phase, ReportRow, CSV_HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot write model to {path}: {source}")]
    CannotWriteModel {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Learning(#[from] LearningError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{algorithm} produced an invalid certificate on trial seed {seed}; reproduce with `simax verify --model <model> --seed {seed}`")]
    Verification { algorithm: Algorithm, seed: u64 },
    #[error("{path}: malformed CSV at row {row}: {message}")]
    MalformedCsv {
        path: PathBuf,
        row: u64,
        message: String,
    },
    #[error("no data rows")]
    NoDataRows,
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CannotWriteModel { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
