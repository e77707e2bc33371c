//! Config-driven experiments: dataset ingestion, benchmark models, parallel
//! replicate runs and machine-readable reports.

pub mod benchmark;
pub mod config;
pub mod dataset;
pub mod execute;
pub mod report;
pub mod runner;

use crate::error::EvidenceError;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub use benchmark::{
    pima_models, radiata_models, synthetic_normal, BenchModel, NamedModel, NormalGammaDesign,
    RadiataPrior,
};
pub use config::{
    AisSettings, BenchmarkConfig, Budget, EstimatorSettings, ExperimentConfig, LadderSpec,
    PosteriorSampleSettings, PowerSettings, OUTPUT_DIR_ENV,
};
pub use dataset::{
    ingest_dataset, sha256_file, DataTable, DatasetRecord, DatasetSchema, PIMA, RADIATA_PINE,
};
pub use execute::{posterior_sample, run_estimator};
pub use report::{emit_boxplot_data, CellRecord, RunReport, Summary};
pub use runner::{load_benchmark, oracle, run_experiment, validate_experiment, OracleReport};

/// File name of the serialized report inside an output directory.
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row-count mismatch in {path}: expected {expected}, found {found}")]
    RowCountMismatch {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("parse failure in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("checksum mismatch for {path}: expected {expected}, found {found}")]
    ChecksumMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("header mismatch in {path}: expected {expected:?}, found {found:?}")]
    HeaderMismatch {
        path: PathBuf,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("csv output: {0}")]
    Csv(String),

    #[error(transparent)]
    Evidence(#[from] EvidenceError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, line: usize, message: String) -> Self {
        HarnessError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        }
    }

    /// Process exit code; 1 is reserved for runs with failed cells.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Io { .. } | HarnessError::Csv(_) => 3,
            HarnessError::RowCountMismatch { .. } => 4,
            HarnessError::Parse { .. } => 5,
            HarnessError::ChecksumMismatch { .. } => 6,
            HarnessError::HeaderMismatch { .. } => 7,
            HarnessError::Evidence(_) => 8,
        }
    }
}
