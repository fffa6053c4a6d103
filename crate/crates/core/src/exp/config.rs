use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{ExpError, Result};
use crate::dynamics::SyntheticSpec;
use crate::maze::grid_n_for_side;
use crate::solver::Algo;
use crate::tda::ClassifyParams;

/// Raster sides used when none are configured.
pub const DEFAULT_SIZES: [usize; 5] = [9, 19, 29, 39, 49];

/// Percolation grid: fine steps near zero, then two large values.
pub const DEFAULT_P_VALUES: [f64; 13] = [0.0, 0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20, 0.5, 1.0];

/// Burn-in window and classifier settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TdaConfig {
    /// First retained iterate.
    pub burn_in: usize,
    /// Last retained iterate (inclusive).
    pub end: usize,
    pub alpha: f64,
    pub ball_radius: f64,
    /// Absolute persistence threshold, overriding `alpha`.
    pub thresh: Option<f64>,
}

impl Default for TdaConfig {
    fn default() -> Self {
        Self { burn_in: 3001, end: 3400, alpha: 0.25, ball_radius: 0.01, thresh: None }
    }
}

impl TdaConfig {
    pub fn classify_params(&self) -> ClassifyParams {
        ClassifyParams { ball_radius: self.ball_radius, alpha: self.alpha, thresh: self.thresh }
    }
}

/// One group of trajectories in a TDA batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum TdaSource {
    /// `count` synthetic trajectories built from `spec`, each with its own seed.
    Synthetic {
        #[serde(default)]
        group: Option<String>,
        count: usize,
        #[serde(default)]
        spec: SyntheticSpec,
    },
    /// Trajectory files matching a glob pattern, in sorted path order.
    Files {
        #[serde(default)]
        group: Option<String>,
        glob: String,
    },
}

impl TdaSource {
    pub fn group(&self) -> String {
        match self {
            TdaSource::Synthetic { group, spec, .. } => group.clone().unwrap_or_else(|| spec.kind.to_string()),
            TdaSource::Files { group, glob } => group.clone().unwrap_or_else(|| glob.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Raster sides `n = 2 * grid_n - 1`; odd and at least 3.
    pub sizes: Vec<usize>,
    pub mazes_per_size: usize,
    pub p_values: Vec<f64>,
    /// Unset means the sweep's own default: `true` for the size sweep, `false`
    /// for the percolation sweep and neighbour breakdown.
    pub deadend_start: Option<bool>,
    pub seed: u64,
    pub solver: Algo,
    pub tda: TdaConfig,
    pub sources: Vec<TdaSource>,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_SIZES.to_vec(),
            mazes_per_size: 100,
            p_values: DEFAULT_P_VALUES.to_vec(),
            deadend_start: None,
            seed: 0,
            solver: Algo::Bfs,
            tda: TdaConfig::default(),
            sources: Vec::new(),
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| ExpError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ExpError::Config(msg));
        for &n in &self.sizes {
            if n < 3 || grid_n_for_side(n).is_none() {
                return bad(format!("maze size {n} must be odd and at least 3"));
            }
        }
        if self.mazes_per_size == 0 {
            return bad("mazes_per_size must be at least 1".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("percolation value {p} outside [0, 1]"));
        }
        if self.tda.burn_in > self.tda.end {
            return bad(format!("burn_in {} exceeds end {}", self.tda.burn_in, self.tda.end));
        }
        self.tda.classify_params().validate().map_err(|e| ExpError::Config(e.to_string()))?;
        for source in &self.sources {
            match source {
                TdaSource::Synthetic { count, spec, .. } => {
                    if *count == 0 {
                        return bad(format!("synthetic source {} has count 0", source.group()));
                    }
                    spec.validate().map_err(|e| ExpError::Config(e.to_string()))?;
                }
                TdaSource::Files { glob, .. } => {
                    glob::Pattern::new(glob).map_err(|e| ExpError::Config(format!("glob '{glob}': {e}")))?;
                }
            }
        }
        Ok(())
    }

    /// `(raster side, grid_n)` pairs.
    pub fn grid_sizes(&self) -> Vec<(usize, usize)> {
        self.sizes.iter().filter_map(|&n| grid_n_for_side(n).map(|g| (n, g))).collect()
    }
}
