//! Experiment protocols over the oracle solvers and the trajectory classifier,
//! with CSV, JSON and SVG reporting.
//!
//! All sweeps are deterministic functions of their configuration: every maze
//! and every synthetic trajectory draws from a stream derived from the master
//! seed and its own coordinates, and rows are assembled in a fixed order no
//! matter how the work is scheduled.

mod config;
mod report;
mod sweep;
mod tda_batch;

pub use config::{ExperimentConfig, TdaConfig, TdaSource, DEFAULT_P_VALUES, DEFAULT_SIZES};
pub use report::{emit_report, AccuracyRow, FrequencyRow, ReportFormat, ReportKind, SweepReport};
pub use sweep::{run_neighbor_breakdown, run_percolation_sweep, run_size_sweep, sample_maze, SampledMaze};
pub use tda_batch::{run_tda_batch, TdaBatch, TdaDetailRow};

use thiserror::Error;

use crate::dynamics::DynError;
use crate::maze::MazeError;
use crate::solver::SolverError;
use crate::tda::TdaError;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("maze {id}: {source}")]
    Maze { id: String, source: MazeError },
    #[error("maze {id}: {source}")]
    Solver { id: String, source: SolverError },
    #[error(transparent)]
    Tda(#[from] TdaError),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ExpError {
    pub fn is_config(&self) -> bool {
        matches!(self, ExpError::Config(_))
    }
}

pub type Result<T, E = ExpError> = std::result::Result<T, E>;
