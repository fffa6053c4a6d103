use rand::seq::SliceRandom;
use rand::Rng;

use super::{Coord, Direction, Endpoints, LatticeMaze, MazeConfig, MazeError, MazeInstance, Result};
use crate::rng;

/// Randomized depth-first search spanning tree of the `grid_n` lattice.
///
/// The walk starts at a uniformly drawn node; at each expansion the unvisited
/// lattice neighbours of the stack top are shuffled and the first is carved.
pub fn gen_dfs(grid_n: usize, seed: u64) -> Result<LatticeMaze> {
    let mut maze = LatticeMaze::empty(grid_n)?;
    let mut rng = rng::stream(seed);
    let mut visited = vec![false; maze.node_count()];
    let origin = maze.coord(rng.random_range(0..maze.node_count()));
    visited[maze.index(origin)] = true;
    let mut stack = vec![origin];
    let mut candidates = Vec::with_capacity(4);

    while let Some(&current) = stack.last() {
        candidates.clear();
        candidates.extend(
            Direction::ALL
                .into_iter()
                .filter_map(|d| current.step(d, grid_n))
                .filter(|nb| !visited[maze.index(*nb)]),
        );
        if candidates.is_empty() {
            stack.pop();
            continue;
        }
        candidates.shuffle(&mut rng);
        let next = candidates[0];
        maze.set_edge(current, next, true)?;
        visited[maze.index(next)] = true;
        stack.push(next);
    }
    Ok(maze)
}

/// Turns every wall (absent lattice edge) into a passage with probability `p`,
/// independently, visiting walls in canonical order. Existing edges are kept.
pub fn percolate(maze: &LatticeMaze, p: f64, seed: u64) -> Result<LatticeMaze> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MazeError::Probability(p));
    }
    let mut out = maze.clone();
    let mut rng = rng::stream(seed);
    let walls: Vec<_> = maze.lattice_pairs().filter(|&(a, b)| !maze.has_edge(a, b)).collect();
    for (a, b) in walls {
        if rng.random::<f64>() < p {
            out.set_edge(a, b, true)?;
        }
    }
    Ok(out)
}

/// Samples the end uniformly over all nodes, then the start uniformly over the
/// valid nodes: not the end, not lattice-adjacent to it and, with
/// `deadend_start`, of degree exactly one.
pub fn sample_endpoints(maze: &LatticeMaze, deadend_start: bool, seed: u64) -> Result<Endpoints> {
    let mut rng = rng::stream(seed);
    let end = maze.coord(rng.random_range(0..maze.node_count()));
    let valid: Vec<Coord> = maze
        .nodes()
        .filter(|&c| c != end && !c.is_adjacent(end))
        .filter(|&c| !deadend_start || maze.degree(c) == 1)
        .collect();
    if valid.is_empty() {
        return Err(MazeError::NoValidStart { end, deadend_start });
    }
    let start = valid[rng.random_range(0..valid.len())];
    Ok(Endpoints { start, end })
}

/// Full pipeline for one maze: RDFS, percolation, then endpoints. Each stage
/// draws from its own stream derived from `config.seed`.
pub fn generate(config: &MazeConfig) -> Result<MazeInstance> {
    let tree = gen_dfs(config.grid_n, rng::mix(config.seed, 0))?;
    let maze = percolate(&tree, config.p, rng::mix(config.seed, 1))?;
    let endpoints = sample_endpoints(&maze, config.deadend_start, rng::mix(config.seed, 2))?;
    Ok(MazeInstance { config: *config, maze, endpoints })
}
