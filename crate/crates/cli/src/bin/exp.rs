//! Experiment sweeps. Each subcommand reads an optional JSON configuration,
//! applies flag overrides and writes `<subcommand>.{csv,json,svg}` plus the
//! resolved configuration to the output directory.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{ArgAction, Args, Parser, Subcommand};
use extrap_cli::{config_error, main_with};
use extrap_core::exp::{
    emit_report, run_neighbor_breakdown, run_percolation_sweep, run_size_sweep, run_tda_batch, ExperimentConfig,
    ReportFormat, SweepReport, TdaSource,
};
use extrap_core::solver::Algo;

#[derive(Parser)]
#[command(name = "exp", about = "Extrapolation experiments over maze and trajectory datasets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Accuracy against maze size at p = 0.
    SizeSweep(Common),
    /// Accuracy over every size and percolation value.
    Percolation(Common),
    /// Accuracy stratified by the degree of the start node (deadend_start = false).
    Neighbors(Common),
    /// Behaviour-class frequencies of trajectory groups.
    TdaBatch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long)]
        end: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        ball_radius: Option<f64>,
        #[arg(long)]
        thresh: Option<f64>,
        /// Add a file source; may be repeated.
        #[arg(long = "files", value_name = "GLOB")]
        files: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (falls back to `out_dir` in the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated raster sides.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    mazes_per_size: Option<usize>,
    /// Comma-separated percolation values.
    #[arg(long, value_delimiter = ',')]
    p_values: Option<Vec<f64>>,
    #[arg(long, action = ArgAction::Set)]
    deadend_start: Option<bool>,
    #[arg(long)]
    solver: Option<Algo>,
}

impl Common {
    fn resolve(&self) -> anyhow::Result<(ExperimentConfig, PathBuf)> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| config_error(format!("reading {}: {e}", path.display())))?;
                ExperimentConfig::from_json(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(sizes) = &self.sizes {
            config.sizes = sizes.clone();
        }
        if let Some(m) = self.mazes_per_size {
            config.mazes_per_size = m;
        }
        if let Some(p) = &self.p_values {
            config.p_values = p.clone();
        }
        if self.deadend_start.is_some() {
            config.deadend_start = self.deadend_start;
        }
        if let Some(s) = self.solver {
            config.solver = s;
        }
        let out = self
            .out
            .clone()
            .or_else(|| config.out_dir.clone())
            .ok_or_else(|| config_error("no output directory: pass --out or set out_dir"))?;
        Ok((config, out))
    }
}

fn emit(report: &SweepReport, config: &ExperimentConfig, out: &PathBuf) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join("config.json"), serde_json::to_string_pretty(config)? + "\n")?;
    for format in ReportFormat::ALL {
        let path = emit_report(report, format, out)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    main_with(|cli: Cli| match cli.cmd {
        Cmd::SizeSweep(common) => {
            let (config, out) = common.resolve()?;
            emit(&run_size_sweep(&config)?, &config, &out)
        }
        Cmd::Percolation(common) => {
            let (config, out) = common.resolve()?;
            emit(&run_percolation_sweep(&config)?, &config, &out)
        }
        Cmd::Neighbors(common) => {
            let (config, out) = common.resolve()?;
            emit(&run_neighbor_breakdown(&config)?, &config, &out)
        }
        Cmd::TdaBatch { common, burn_in, end, alpha, ball_radius, thresh, files } => {
            let (mut config, out) = common.resolve()?;
            let tda = &mut config.tda;
            tda.burn_in = burn_in.unwrap_or(tda.burn_in);
            tda.end = end.unwrap_or(tda.end);
            tda.alpha = alpha.unwrap_or(tda.alpha);
            tda.ball_radius = ball_radius.unwrap_or(tda.ball_radius);
            tda.thresh = thresh.or(tda.thresh);
            config.sources.extend(files.into_iter().map(|glob| TdaSource::Files { group: None, glob }));
            if config.sources.is_empty() {
                return Err(config_error("no trajectory sources: add them to the configuration or pass --files"));
            }
            config.validate()?;
            let batch = run_tda_batch(&config, &config.sources)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("tda-batch-details.csv"), batch.details_csv()?)?;
            emit(&batch.report, &config, &out)
        }
    })
}
