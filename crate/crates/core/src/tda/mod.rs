//! Persistent homology of point clouds and behaviour classification of latent
//! trajectories.

mod betti;
mod classify;
mod cloud;
mod rips;
mod sliding;
mod svd;

pub use betti::{persistent_betti, BehaviourClass, BettiSignature};
pub use classify::{classify, Classification, ClassifyParams};
pub use cloud::{distance_matrix, DistanceMatrix, PointCloud};
pub use rips::{rips_persistence, Bar, PersistenceDiagram};
pub use sliding::{sliding_window, SlidingWindowParams};
pub use svd::{pca3, svd_project};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TdaError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid distance matrix: {0}")]
    Matrix(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("diagram parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = TdaError> = std::result::Result<T, E>;
