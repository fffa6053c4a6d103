use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::scalar::Scalar;

use super::{PointCloud, Result, TdaError};

/// Delay-embedding parameters: `window_depth` extra copies spaced `delay` apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidingWindowParams {
    pub window_depth: usize,
    pub delay: usize,
}

/// Point `j` is `[u_j; u_{j+tau}; ...; u_{j+d*tau}]`.
pub fn sliding_window<T: Scalar>(traj: &Trajectory<T>, params: SlidingWindowParams) -> Result<PointCloud<T>> {
    let SlidingWindowParams { window_depth, delay } = params;
    if delay == 0 {
        return Err(TdaError::Param("delay must be positive".into()));
    }
    let span = window_depth.checked_mul(delay).ok_or_else(|| TdaError::Range("window span overflows".into()))?;
    if span >= traj.len() {
        return Err(TdaError::Range(format!(
            "window span {span} leaves no points in a trajectory of length {}",
            traj.len()
        )));
    }
    let count = traj.len() - span;
    let mut data = Vec::with_capacity(count * (window_depth + 1) * traj.dim());
    for j in 0..count {
        for w in 0..=window_depth {
            data.extend_from_slice(traj.point(j + w * delay));
        }
    }
    PointCloud::new((window_depth + 1) * traj.dim(), data)
}
