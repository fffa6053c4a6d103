//! Maze datasets for studying extrapolation, oracle solvers, latent-trajectory
//! dynamics and persistent-homology classification of limiting behaviour.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the precision for the common cases.

pub mod dynamics;
pub mod exp;
pub mod maze;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod tda;

pub use scalar::Scalar;

pub type Trajectory64 = dynamics::Trajectory<f64>;
pub type Trajectory32 = dynamics::Trajectory<f32>;
pub type PointCloud64 = tda::PointCloud<f64>;
pub type PointCloud32 = tda::PointCloud<f32>;
pub type DistanceMatrix64 = tda::DistanceMatrix<f64>;
pub type DistanceMatrix32 = tda::DistanceMatrix<f32>;
pub type PersistenceDiagram64 = tda::PersistenceDiagram<f64>;
pub type PersistenceDiagram32 = tda::PersistenceDiagram<f32>;
pub type Classification64 = tda::Classification<f64>;
