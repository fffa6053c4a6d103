//! Lattice mazes: generation along the size / dead-end-start / percolation
//! axes, endpoint sampling and raster encoding.
//!
//! A maze is a connected subgraph of the `grid_n x grid_n` lattice. Nodes are
//! addressed by [`Coord`]; node `(r, c)` occupies raster pixel `(2r, 2c)` and
//! the edge between two lattice neighbours occupies the pixel between them, so
//! the raster side is `2 * grid_n - 1`.

mod generate;
mod lattice;
mod raster;
mod record;

pub use generate::{gen_dfs, generate, percolate, sample_endpoints};
pub use lattice::{Coord, Direction, LatticeMaze};
pub use raster::{
    derasterize, rasterize, rasterize_solution, read_ppm, write_ppm, BinaryGrid, RasterImage, Rgb,
};
pub use record::MazeRecord;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MazeError {
    #[error("grid_n must be at least 1, got {0}")]
    GridSize(usize),
    #[error("percolation probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("no valid start node (end {end:?}, deadend_start = {deadend_start})")]
    NoValidStart { end: Coord, deadend_start: bool },
    #[error("nodes {0:?} and {1:?} are not lattice neighbours inside the grid")]
    NotAdjacent(Coord, Coord),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid endpoints: {0}")]
    Endpoints(String),
    #[error("raster decode failed: {0}")]
    Raster(String),
    #[error("PPM format error at byte {offset}: {reason}")]
    Ppm { offset: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = MazeError> = std::result::Result<T, E>;

/// Parameters of one generated maze.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MazeConfig {
    pub grid_n: usize,
    pub p: f64,
    pub deadend_start: bool,
    pub seed: u64,
}

impl MazeConfig {
    pub fn new(grid_n: usize, p: f64, deadend_start: bool, seed: u64) -> Result<Self> {
        if grid_n == 0 {
            return Err(MazeError::GridSize(grid_n));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(MazeError::Probability(p));
        }
        Ok(Self { grid_n, p, deadend_start, seed })
    }

    /// Training-distribution configuration: 9x9 rasters, no loops, dead-end start.
    pub fn training(seed: u64) -> Self {
        Self { grid_n: 5, p: 0.0, deadend_start: true, seed }
    }

    /// Raster side length `n = 2 * grid_n - 1`.
    pub fn raster_side(&self) -> usize {
        raster_side(self.grid_n)
    }
}

#[inline]
pub fn raster_side(grid_n: usize) -> usize {
    2 * grid_n - 1
}

/// Lattice side for a raster side `n` (odd, at least 1).
pub fn grid_n_for_side(side: usize) -> Option<usize> {
    (side % 2 == 1).then_some(side.div_ceil(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endpoints {
    pub start: Coord,
    pub end: Coord,
}

impl Endpoints {
    pub fn validate(&self, grid_n: usize) -> Result<()> {
        for (name, c) in [("start", self.start), ("end", self.end)] {
            if c.row >= grid_n || c.col >= grid_n {
                return Err(MazeError::Endpoints(format!("{name} {c:?} outside {grid_n}x{grid_n} lattice")));
            }
        }
        if self.start == self.end {
            return Err(MazeError::Endpoints("start equals end".into()));
        }
        Ok(())
    }
}

/// A generated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MazeInstance {
    pub config: MazeConfig,
    pub maze: LatticeMaze,
    pub endpoints: Endpoints,
}
