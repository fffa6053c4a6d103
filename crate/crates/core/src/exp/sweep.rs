use rayon::prelude::*;

use super::report::{AccuracyRow, ReportKind, SweepReport};
use super::{ExpError, ExperimentConfig, Result};
use crate::maze::{generate, MazeConfig, MazeError, MazeInstance};
use crate::rng;
use crate::solver::{exact_match, solution_label, Algo};

/// Upper bound on regenerations of one maze slot.
const MAX_ATTEMPTS: u64 = 10_000;

/// A maze drawn for one slot of a sweep, with the number of generations it took.
#[derive(Debug, Clone)]
pub struct SampledMaze {
    pub id: String,
    pub instance: MazeInstance,
    pub attempts: u64,
}

/// Maze `index` of raster side `n` at percolation `p`. The seed depends on
/// `(master, n, index, attempt)` only, so the same slot sees the same tree at
/// every `p` and adding sizes or mazes leaves existing slots unchanged. A maze
/// without a valid start is regenerated from the next attempt's seed.
pub fn sample_maze(master: u64, n: usize, grid_n: usize, p: f64, deadend_start: bool, index: usize) -> Result<SampledMaze> {
    let id = format!("n{n}_p{p}_{index:05}");
    for attempt in 0..MAX_ATTEMPTS {
        let seed = rng::derive(master, &[n as u64, index as u64, attempt]);
        let config = MazeConfig::new(grid_n, p, deadend_start, seed).map_err(|e| ExpError::Config(e.to_string()))?;
        match generate(&config) {
            Ok(instance) => return Ok(SampledMaze { id, instance, attempts: attempt + 1 }),
            Err(MazeError::NoValidStart { .. }) => continue,
            Err(source) => return Err(ExpError::Maze { id, source }),
        }
    }
    Err(ExpError::Maze {
        id,
        source: MazeError::Endpoints(format!("no valid start after {MAX_ATTEMPTS} attempts")),
    })
}

/// Per-maze outcome: start degree, cycle flag, exact-match score, attempts.
struct Outcome {
    start_degree: usize,
    has_cycle: bool,
    correct: bool,
    attempts: u64,
}

fn evaluate_slots(config: &ExperimentConfig, n: usize, grid_n: usize, p: f64, deadend_start: bool) -> Result<Vec<Outcome>> {
    let algo = config.solver;
    (0..config.mazes_per_size)
        .into_par_iter()
        .map(|index| {
            let sampled = sample_maze(config.seed, n, grid_n, p, deadend_start, index)?;
            let inst = &sampled.instance;
            let solver_err = |source| ExpError::Solver { id: sampled.id.clone(), source };
            let label = solution_label(&inst.maze, &inst.endpoints).map_err(solver_err)?;
            let pred = algo.solve(&inst.maze, &inst.endpoints).map_err(solver_err)?;
            Ok(Outcome {
                start_degree: inst.maze.degree(inst.endpoints.start),
                has_cycle: inst.maze.has_cycle(),
                correct: exact_match(&pred, &label).map_err(solver_err)? == 1,
                attempts: sampled.attempts,
            })
        })
        .collect()
}

fn summarize<'a>(
    n: usize,
    grid_n: usize,
    p: f64,
    deadend_start: bool,
    start_degree: Option<usize>,
    algo: Algo,
    outcomes: impl Iterator<Item = &'a Outcome>,
) -> AccuracyRow {
    let (mut samples, mut correct, mut cyclic, mut attempts) = (0usize, 0usize, 0usize, 0u64);
    for o in outcomes {
        samples += 1;
        correct += o.correct as usize;
        cyclic += o.has_cycle as usize;
        attempts += o.attempts;
    }
    let frac = |k: usize| if samples == 0 { 0.0 } else { k as f64 / samples as f64 };
    AccuracyRow {
        n,
        grid_n,
        p,
        deadend_start,
        start_degree,
        solver: algo,
        samples,
        correct,
        accuracy: frac(correct),
        cyclic_fraction: frac(cyclic),
        attempts,
    }
}

/// Exact-match accuracy of the configured solver per maze size, at `p = 0`.
pub fn run_size_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let deadend_start = config.deadend_start.unwrap_or(true);
    let mut rows = Vec::new();
    for (n, grid_n) in config.grid_sizes() {
        let outcomes = evaluate_slots(config, n, grid_n, 0.0, deadend_start)?;
        rows.push(summarize(n, grid_n, 0.0, deadend_start, None, config.solver, outcomes.iter()));
    }
    Ok(SweepReport::accuracy(ReportKind::SizeSweep, rows))
}

/// Accuracy and fraction of cyclic mazes per size and percolation value.
pub fn run_percolation_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let deadend_start = config.deadend_start.unwrap_or(false);
    if deadend_start && config.p_values.contains(&1.0) && !config.sizes.is_empty() {
        return Err(ExpError::Config("p = 1 leaves no dead ends, so deadend_start must be false".into()));
    }
    let mut rows = Vec::new();
    for (n, grid_n) in config.grid_sizes() {
        for &p in &config.p_values {
            let outcomes = evaluate_slots(config, n, grid_n, p, deadend_start)?;
            rows.push(summarize(n, grid_n, p, deadend_start, None, config.solver, outcomes.iter()));
        }
    }
    Ok(SweepReport::accuracy(ReportKind::Percolation, rows))
}

/// Accuracy at `p = 0` stratified by the degree of the start node. Only
/// non-empty strata are reported, so counts per size sum to `mazes_per_size`.
pub fn run_neighbor_breakdown(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    if config.deadend_start == Some(true) {
        return Err(ExpError::Config("the neighbour breakdown needs deadend_start = false".into()));
    }
    let mut rows = Vec::new();
    for (n, grid_n) in config.grid_sizes() {
        let outcomes = evaluate_slots(config, n, grid_n, 0.0, false)?;
        for degree in 1..=4 {
            let stratum = outcomes.iter().filter(|o| o.start_degree == degree);
            if stratum.clone().next().is_some() {
                rows.push(summarize(n, grid_n, 0.0, false, Some(degree), config.solver, stratum));
            }
        }
    }
    Ok(SweepReport::accuracy(ReportKind::Neighbors, rows))
}
