//! `maze gen` writes rasterized maze datasets; `maze solve` scores an oracle
//! solver against their labels.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgAction, Parser, Subcommand};
use rayon::prelude::*;
use extrap_cli::{config_error, list_files, main_with, write_csv};
use extrap_core::exp::sample_maze;
use extrap_core::maze::{raster_side, read_ppm, rasterize, write_ppm, BinaryGrid, MazeConfig, MazeRecord, RasterImage};
use extrap_core::solver::{solution_label, AccuracyRecord, Algo};

#[derive(Parser)]
#[command(name = "maze", about = "Generate and solve lattice mazes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate mazes into OUT/inputs (PPM + JSON) and OUT/labels (solution PPM).
    Gen {
        #[arg(long)]
        grid_n: usize,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        deadend_start: bool,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Integer pixel up-scaling of the written rasters.
        #[arg(long, default_value_t = 1)]
        scale: usize,
    },
    /// Solve every maze JSON in IN and compare against the labels in LABELS.
    Solve {
        #[arg(long, default_value = "bfs")]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

const ACCURACY_HEADER: [&str; 8] =
    ["maze_id", "grid_n", "p", "deadend_start", "start_degree", "has_cycle", "algo", "accuracy"];

fn write_image(path: &Path, image: &RasterImage) -> anyhow::Result<()> {
    let mut bytes = Vec::new();
    write_ppm(&mut bytes, image)?;
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn generate(grid_n: usize, p: f64, deadend_start: bool, count: usize, seed: u64, out: &Path, scale: usize) -> anyhow::Result<()> {
    MazeConfig::new(grid_n, p, deadend_start, seed).map_err(|e| config_error(e.to_string()))?;
    if grid_n < 2 {
        return Err(config_error("grid_n must be at least 2 to place distinct endpoints"));
    }
    if scale == 0 {
        return Err(config_error("scale must be at least 1"));
    }
    let inputs = out.join("inputs");
    let labels = out.join("labels");
    fs::create_dir_all(&inputs)?;
    fs::create_dir_all(&labels)?;
    let n = raster_side(grid_n);
    (0..count).into_par_iter().try_for_each(|i| -> anyhow::Result<()> {
        let sampled = sample_maze(seed, n, grid_n, p, deadend_start, i)?;
        let inst = &sampled.instance;
        let stem = format!("maze_{i:05}");
        let image = rasterize(&inst.maze, &inst.endpoints)?.upscale(scale);
        let label = solution_label(&inst.maze, &inst.endpoints)?.to_image().upscale(scale);
        write_image(&inputs.join(format!("{stem}.ppm")), &image)?;
        write_image(&labels.join(format!("{stem}.ppm")), &label)?;
        let json = MazeRecord::from(inst).to_json()?;
        fs::write(inputs.join(format!("{stem}.json")), json + "\n")?;
        Ok(())
    })?;
    eprintln!("wrote {count} mazes of side {n} to {}", out.display());
    Ok(())
}

/// Reads a label raster, undoing any integer up-scaling.
fn read_label(path: &Path, side: usize) -> anyhow::Result<BinaryGrid> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let image = read_ppm(&bytes).with_context(|| format!("decoding {}", path.display()))?;
    if image.side() % side != 0 {
        bail!("{}: side {} is not a multiple of {side}", path.display(), image.side());
    }
    let k = image.side() / side;
    let pixels = (0..side * side).map(|i| image.get((i / side) * k, (i % side) * k)).collect();
    Ok(BinaryGrid::from_image(&RasterImage::from_pixels(side, pixels)?)?)
}

fn solve(algo: Algo, input: &Path, labels: &Path, report: &Path) -> anyhow::Result<()> {
    let files = list_files(input, "json")?;
    if files.is_empty() {
        return Err(config_error(format!("no maze JSON files in {}", input.display())));
    }
    let records = files
        .par_iter()
        .map(|path| -> anyhow::Result<AccuracyRecord> {
            let stem = path.file_stem().and_then(|s| s.to_str()).context("non UTF-8 file name")?;
            let text = fs::read_to_string(path)?;
            let inst = MazeRecord::from_json(&text)
                .and_then(|r| r.to_instance())
                .with_context(|| format!("loading {}", path.display()))?;
            let label = read_label(&labels.join(format!("{stem}.ppm")), raster_side(inst.config.grid_n))?;
            Ok(AccuracyRecord::score(stem, &inst, algo, &label)?)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    write_csv(report, &ACCURACY_HEADER, &records)?;
    let correct: usize = records.iter().map(|r| usize::from(r.accuracy)).sum();
    eprintln!("{algo}: {correct}/{} exact matches", records.len());
    Ok(())
}

fn main() -> ExitCode {
    main_with(|cli: Cli| match cli.cmd {
        Cmd::Gen { grid_n, p, deadend_start, count, seed, out, scale } => {
            generate(grid_n, p, deadend_start, count, seed, &out, scale)
        }
        Cmd::Solve { algo, input, labels, report } => solve(algo, &input, &labels, &report),
    })
}
