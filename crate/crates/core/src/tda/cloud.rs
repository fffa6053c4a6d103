use crate::dynamics::Trajectory;
use crate::scalar::{euclidean, Scalar};

use super::{Result, TdaError};

/// `m >= 1` points in `R^k`, row-major. Point order carries no meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn new(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(TdaError::Shape(format!("{} values cannot form points of dimension {dim}", data.len())));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(TdaError::Shape("non-finite coordinate".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_points<P: AsRef<[T]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.as_ref().len());
        if points.iter().any(|p| p.as_ref().len() != dim) {
            return Err(TdaError::Shape("points of mixed dimension".into()));
        }
        Self::new(dim, points.iter().flat_map(|p| p.as_ref().iter().copied()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> T {
        let mut diam = T::zero();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                diam = diam.max(euclidean(self.point(i), self.point(j)));
            }
        }
        diam
    }
}

impl<T: Scalar> TryFrom<&Trajectory<T>> for PointCloud<T> {
    type Error = TdaError;

    fn try_from(traj: &Trajectory<T>) -> Result<Self> {
        Self::new(traj.dim(), traj.as_slice().to_vec())
    }
}

/// Symmetric `m x m` matrix of non-negative distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validates a full row-major matrix.
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(TdaError::Matrix(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        for i in 0..n {
            if data[i * n + i] != T::zero() {
                return Err(TdaError::Matrix(format!("diagonal entry ({i}, {i}) is not zero")));
            }
            for j in i + 1..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if !a.is_finite() || a < T::zero() {
                    return Err(TdaError::Matrix(format!("entry ({i}, {j}) = {a} is not a finite non-negative distance")));
                }
                if a != b {
                    return Err(TdaError::Matrix(format!("asymmetric entries ({i}, {j}) = {a} and ({j}, {i}) = {b}")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn diameter(&self) -> T {
        self.data.iter().copied().fold(T::zero(), T::max)
    }
}

/// Euclidean distances, each unordered pair computed once and mirrored.
pub fn distance_matrix<T: Scalar>(cloud: &PointCloud<T>) -> DistanceMatrix<T> {
    let n = cloud.len();
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(cloud.point(i), cloud.point(j));
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix { n, data }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let c = PointCloud::new(3, vec![1.0f64, 2.0, 3.0]).unwrap();
        assert_eq!(distance_matrix(&c).as_slice(), &[0.0]);
    }

    #[test]
    fn two_points_on_a_line() {
        let c = PointCloud::new(1, vec![0.0f64, 3.0]).unwrap();
        assert_eq!(distance_matrix(&c).as_slice(), &[0.0, 3.0, 3.0, 0.0]);
    }

    #[test]
    fn unit_square() {
        let c = PointCloud::from_points(&[[0.0f64, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let d = distance_matrix(&c);
        for i in 0..4 {
            let mut row: Vec<f64> = (0..4).filter(|&j| j != i).map(|j| d.get(i, j)).collect();
            row.sort_by(f64::total_cmp);
            assert_eq!(row, vec![1.0, 1.0, 2f64.sqrt()]);
        }
        assert_eq!(d.diameter(), 2f64.sqrt());
        assert_eq!(c.diameter(), 2f64.sqrt());
    }

    #[test]
    fn validation() {
        assert!(DistanceMatrix::new(2, vec![0.0f64, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0f64, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![1.0f64, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0f64, 1.0, 1.0, 0.0]).is_ok());
        assert!(PointCloud::new(2, vec![0.0f64, f64::NAN]).is_err());
        assert!(PointCloud::<f64>::new(2, vec![]).is_err());
    }
}
