use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::scalar::Scalar;

use super::{
    distance_matrix, persistent_betti, rips_persistence, svd_project, BehaviourClass, BettiSignature,
    PersistenceDiagram, PointCloud, Result, TdaError,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyParams {
    /// Clouds of diameter at most twice this radius are fixed points.
    pub ball_radius: f64,
    /// Relative threshold: bars longer than `alpha * diameter` persist.
    pub alpha: f64,
    /// Absolute threshold, overriding `alpha` when set.
    pub thresh: Option<f64>,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        Self { ball_radius: 0.01, alpha: 0.25, thresh: None }
    }
}

impl ClassifyParams {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.ball_radius) || !ok(self.alpha) || !self.thresh.is_none_or(ok) {
            return Err(TdaError::Param(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn resolve_thresh(&self, diameter: f64) -> f64 {
        self.thresh.unwrap_or(self.alpha * diameter)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T> {
    pub class: BehaviourClass,
    pub diameter: f64,
    /// `None` when the ball rule decided the class.
    pub signature: Option<BettiSignature>,
    pub diagram: Option<PersistenceDiagram<T>>,
}

/// Classifies the limiting behaviour of a (windowed) trajectory from the
/// persistent Betti numbers of its point cloud.
pub fn classify<T: Scalar>(traj: &Trajectory<T>, params: &ClassifyParams) -> Result<Classification<T>> {
    params.validate()?;
    if traj.len() < 2 {
        return Err(TdaError::Range(format!("classification needs at least 2 points, got {}", traj.len())));
    }
    let cloud = PointCloud::try_from(traj)?;
    let diameter = distance_matrix(&cloud).diameter().as_f64();
    if diameter <= 2.0 * params.ball_radius {
        return Ok(Classification { class: BehaviourClass::FixedPoint, diameter, signature: None, diagram: None });
    }
    let projected = svd_project(&cloud, cloud.len().min(cloud.dim()))?;
    let dmat = distance_matrix(&projected);
    let diagram = rips_persistence(&dmat, 1)?;
    let thresh = params.resolve_thresh(dmat.diameter().as_f64());
    let signature = persistent_betti(&diagram, T::of(thresh));
    Ok(Classification {
        class: BehaviourClass::from_signature(&signature),
        diameter,
        signature: Some(signature),
        diagram: Some(diagram),
    })
}
