//! Classical maze solvers used as oracles, and the exact-match metric.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maze::{rasterize_solution, BinaryGrid, Coord, Endpoints, LatticeMaze, MazeError};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no path from {start:?} to {end:?}")]
    NoPath { start: Coord, end: Coord },
    #[error("shape mismatch: {0}x{0} vs {1}x{1}")]
    Shape(usize, usize),
    #[error(transparent)]
    Maze(#[from] MazeError),
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;

/// Predicted solution raster; white marks the predicted path.
pub type Prediction = BinaryGrid;

/// Simple path through a maze, start first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionPath {
    pub nodes: Vec<Coord>,
}

impl SolutionPath {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Breadth-first search expanding neighbours N, E, S, W and keeping the first
/// parent found, so ties between equally short paths resolve deterministically.
pub fn bfs_shortest_path(maze: &LatticeMaze, endpoints: &Endpoints) -> Result<SolutionPath> {
    let Endpoints { start, end } = *endpoints;
    endpoints.validate(maze.grid_n())?;
    let mut parent: Vec<Option<usize>> = vec![None; maze.node_count()];
    let mut visited = vec![false; maze.node_count()];
    let mut queue = VecDeque::from([start]);
    visited[maze.index(start)] = true;
    while let Some(node) = queue.pop_front() {
        if node == end {
            break;
        }
        for nb in maze.neighbors(node) {
            let i = maze.index(nb);
            if !visited[i] {
                visited[i] = true;
                parent[i] = Some(maze.index(node));
                queue.push_back(nb);
            }
        }
    }
    if !visited[maze.index(end)] {
        return Err(SolverError::NoPath { start, end });
    }
    let mut nodes = vec![end];
    let mut cursor = maze.index(end);
    while let Some(p) = parent[cursor] {
        nodes.push(maze.coord(p));
        cursor = p;
    }
    nodes.reverse();
    Ok(SolutionPath { nodes })
}

/// Dead-end filling: repeatedly removes every node of degree at most one other
/// than the endpoints, one simultaneous round at a time, and renders what is
/// left. Exact on trees; loops survive.
pub fn dead_end_fill(maze: &LatticeMaze, endpoints: &Endpoints) -> Result<Prediction> {
    endpoints.validate(maze.grid_n())?;
    let n = maze.node_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = maze.nodes().map(|c| maze.degree(c)).collect();
    let keep = [maze.index(endpoints.start), maze.index(endpoints.end)];
    loop {
        let round: Vec<usize> = (0..n).filter(|&i| alive[i] && degree[i] <= 1 && !keep.contains(&i)).collect();
        if round.is_empty() {
            break;
        }
        for &i in &round {
            alive[i] = false;
        }
        for &i in &round {
            for nb in maze.neighbors(maze.coord(i)) {
                let j = maze.index(nb);
                if alive[j] {
                    degree[j] -= 1;
                }
            }
        }
    }

    let mut pred = BinaryGrid::black(crate::maze::raster_side(maze.grid_n()));
    for (i, _) in alive.iter().enumerate().filter(|(_, &a)| a) {
        let c = maze.coord(i);
        pred.set(2 * c.row, 2 * c.col, true);
    }
    for (a, b) in maze.edges() {
        if alive[maze.index(a)] && alive[maze.index(b)] {
            pred.set(a.row + b.row, a.col + b.col, true);
        }
    }
    Ok(pred)
}

/// 1 if every pixel agrees, else 0.
pub fn exact_match(pred: &Prediction, truth: &Prediction) -> Result<u8> {
    if pred.side() != truth.side() {
        return Err(SolverError::Shape(pred.side(), truth.side()));
    }
    Ok(u8::from(pred == truth))
}

/// Number of distinct simple start-to-end paths, stopping once `cap` are found.
pub fn count_simple_paths_capped(maze: &LatticeMaze, endpoints: &Endpoints, cap: usize) -> usize {
    fn dfs(maze: &LatticeMaze, node: Coord, end: Coord, on_path: &mut [bool], found: &mut usize, cap: usize) {
        if node == end {
            *found += 1;
            return;
        }
        for nb in maze.neighbors(node) {
            if *found >= cap {
                return;
            }
            let i = maze.index(nb);
            if !on_path[i] {
                on_path[i] = true;
                dfs(maze, nb, end, on_path, found, cap);
                on_path[i] = false;
            }
        }
    }
    let mut on_path = vec![false; maze.node_count()];
    on_path[maze.index(endpoints.start)] = true;
    let mut found = 0;
    if cap > 0 {
        dfs(maze, endpoints.start, endpoints.end, &mut on_path, &mut found, cap);
    }
    found.min(cap)
}

/// Ground-truth label: the canonical BFS shortest path as a solution raster.
pub fn solution_label(maze: &LatticeMaze, endpoints: &Endpoints) -> Result<Prediction> {
    let path = bfs_shortest_path(maze, endpoints)?;
    Ok(rasterize_solution(maze, &path.nodes)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Bfs,
    #[serde(alias = "dead_end", alias = "dead-end")]
    Deadend,
}

impl Algo {
    pub fn solve(self, maze: &LatticeMaze, endpoints: &Endpoints) -> Result<Prediction> {
        match self {
            Algo::Bfs => solution_label(maze, endpoints),
            Algo::Deadend => dead_end_fill(maze, endpoints),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Bfs => "bfs",
            Algo::Deadend => "deadend",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Algo::Bfs),
            "deadend" | "dead-end" | "dead_end" => Ok(Algo::Deadend),
            other => Err(format!("unknown solver '{other}' (expected bfs or deadend)")),
        }
    }
}

/// One row of a solver evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRecord {
    pub maze_id: String,
    pub grid_n: usize,
    pub p: f64,
    pub deadend_start: bool,
    pub start_degree: usize,
    pub has_cycle: bool,
    pub algo: Algo,
    pub accuracy: u8,
}

impl AccuracyRecord {
    /// Solves one instance with `algo` and scores it against the canonical label.
    pub fn evaluate(maze_id: impl Into<String>, inst: &crate::maze::MazeInstance, algo: Algo) -> Result<Self> {
        let label = solution_label(&inst.maze, &inst.endpoints)?;
        Self::score(maze_id, inst, algo, &label)
    }

    /// Scores `algo` against an externally supplied label.
    pub fn score(
        maze_id: impl Into<String>,
        inst: &crate::maze::MazeInstance,
        algo: Algo,
        label: &Prediction,
    ) -> Result<Self> {
        let pred = algo.solve(&inst.maze, &inst.endpoints)?;
        Ok(Self {
            maze_id: maze_id.into(),
            grid_n: inst.config.grid_n,
            p: inst.config.p,
            deadend_start: inst.config.deadend_start,
            start_degree: inst.maze.degree(inst.endpoints.start),
            has_cycle: inst.maze.has_cycle(),
            algo,
            accuracy: exact_match(&pred, label)?,
        })
    }
}
