use nalgebra::DMatrix;

use crate::scalar::Scalar;

use super::{PointCloud, Result, TdaError};

/// Centred data matrix in `f64` plus its right singular vectors, ordered by
/// decreasing singular value.
fn centred_basis<T: Scalar>(cloud: &PointCloud<T>) -> (DMatrix<f64>, Vec<(f64, usize)>, DMatrix<f64>) {
    let (m, n) = (cloud.len(), cloud.dim());
    let mut x = DMatrix::from_row_iterator(m, n, cloud.as_slice().iter().map(|v| v.as_f64()));
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    let svd = x.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    (x, order, v_t)
}

/// Mean-centres the cloud and returns its coordinates in the top `k` right
/// singular vectors.
pub fn svd_project<T: Scalar>(cloud: &PointCloud<T>, k: usize) -> Result<PointCloud<T>> {
    let (m, n) = (cloud.len(), cloud.dim());
    if k == 0 || k > m.min(n) {
        return Err(TdaError::Range(format!("k = {k} outside 1..={} for {m} points in R^{n}", m.min(n))));
    }
    let (x, order, v_t) = centred_basis(cloud);
    let mut basis = DMatrix::zeros(k, n);
    for (row, &(_, src)) in order.iter().take(k).enumerate() {
        basis.set_row(row, &v_t.row(src));
    }
    let y = x * basis.transpose();
    PointCloud::new(k, y.transpose().iter().map(|&v| T::of(v)).collect())
}

/// First three principal components, zero-padded when the data has fewer
/// than three directions.
pub fn pca3<T: Scalar>(cloud: &PointCloud<T>) -> PointCloud<T> {
    let (m, n) = (cloud.len(), cloud.dim());
    let (x, order, v_t) = centred_basis(cloud);
    let k = 3.min(m).min(n);
    let mut out = vec![T::zero(); m * 3];
    for (axis, &(_, src)) in order.iter().take(k).enumerate() {
        let coords = &x * v_t.row(src).transpose();
        for (i, c) in coords.iter().enumerate() {
            out[i * 3 + axis] = T::of(*c);
        }
    }
    PointCloud::new(3, out).expect("projection of a valid cloud is finite")
}
