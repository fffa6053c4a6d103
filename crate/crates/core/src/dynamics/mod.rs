//! Latent trajectories of weight-tied iterative maps: iteration, fixed-point
//! solving, residuals, burn-in windows, synthetic limit-behaviour generators
//! and the binary trajectory container.

mod io;
mod map;
mod synth;

pub use io::{decode_trajectory, encode_trajectory, read_trajectory, write_trajectory, MAGIC, VERSION};
pub use map::{fixed_point_solve, iterate, AffineMap, FixedPointResult, FnMap, IterativeMap};
pub use synth::{synth, SyntheticKind, SyntheticSpec, LOOP_ANGLE_STEP};

use thiserror::Error;

use crate::scalar::{euclidean, Scalar};

#[derive(Debug, Error)]
pub enum DynError {
    #[error("non-finite value in iterate {index}")]
    NumericalDivergence { index: usize },
    #[error("index range {start}..={end} invalid for a trajectory of {len} points")]
    Range { start: usize, end: usize, len: usize },
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("invalid synthetic spec: {0}")]
    Spec(String),
    #[error("trajectory format error at byte {offset}: {reason}")]
    Format { offset: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = DynError> = std::result::Result<T, E>;

/// Ordered latent iterates `u_0, ..., u_K` in `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    dim: usize,
    data: Vec<T>,
    /// Index of the first retained iterate when this trajectory is a window.
    burn_in: Option<usize>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(DynError::Param(format!(
                "{} values do not form a non-empty trajectory of dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data, burn_in: None })
    }

    pub fn from_points<P: AsRef<[T]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.as_ref().len());
        if points.iter().any(|p| p.as_ref().len() != dim) {
            return Err(DynError::Param("points of mixed dimension".into()));
        }
        Self::new(dim, points.iter().flat_map(|p| p.as_ref().iter().copied()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points (`K + 1`).
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn burn_in(&self) -> Option<usize> {
        self.burn_in
    }

    pub fn point(&self, j: usize) -> &[T] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn last(&self) -> &[T] {
        self.point(self.len() - 1)
    }

    /// `r_j = |u_{j+1} - u_j|_2`, one value fewer than there are points.
    pub fn residuals(&self) -> ResidualSeries<T> {
        let values = self.data.chunks_exact(self.dim).zip(self.data.chunks_exact(self.dim).skip(1));
        ResidualSeries { values: values.map(|(a, b)| euclidean(a, b)).collect() }
    }

    /// Points `start..=end`, recording `start` as the burn-in.
    pub fn window(&self, start: usize, end: usize) -> Result<Self> {
        if start > end || end >= self.len() {
            return Err(DynError::Range { start, end, len: self.len() });
        }
        Ok(Self {
            dim: self.dim,
            data: self.data[start * self.dim..(end + 1) * self.dim].to_vec(),
            burn_in: Some(self.burn_in.unwrap_or(0) + start),
        })
    }

    pub fn cast<U: Scalar>(&self) -> Trajectory<U> {
        Trajectory {
            dim: self.dim,
            data: self.data.iter().map(|&x| U::of(x.as_f64())).collect(),
            burn_in: self.burn_in,
        }
    }
}

/// Distances between consecutive iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> ResidualSeries<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> Option<T> {
        (!self.values.is_empty()).then(|| self.values.iter().copied().sum::<T>() / T::of(self.values.len() as f64))
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> Option<T> {
        let n = self.values.len();
        let mean = self.mean()?;
        (n >= 2).then(|| {
            let ss: T = self.values.iter().map(|&v| (v - mean) * (v - mean)).sum();
            (ss / T::of((n - 1) as f64)).sqrt()
        })
    }

    /// Coefficient of variation `std / mean`.
    pub fn coefficient_of_variation(&self) -> Option<T> {
        let mean = self.mean()?;
        let sd = self.std_dev()?;
        (mean > T::zero()).then(|| sd / mean)
    }
}
