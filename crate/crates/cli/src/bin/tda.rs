//! `tda classify` assigns a behaviour class to the burn-in window of each
//! trajectory; `tda diagram` writes the Rips persistence diagram of one.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use extrap_cli::{config_error, main_with, write_csv};
use extrap_core::dynamics::read_trajectory;
use extrap_core::tda::{classify, distance_matrix, rips_persistence, svd_project, ClassifyParams, PointCloud};

#[derive(Parser)]
#[command(name = "tda", about = "Persistent homology of latent trajectories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Window {
    /// First iterate of the analysed window.
    #[arg(long, default_value_t = 3001)]
    burn_in: usize,
    /// Last iterate of the analysed window (inclusive).
    #[arg(long, default_value_t = 3400)]
    end: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify each trajectory file; one CSV row per file.
    Classify {
        #[arg(long = "in", num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        window: Window,
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long, default_value_t = 0.01)]
        ball_radius: f64,
        /// Absolute persistence threshold; overrides alpha.
        #[arg(long)]
        thresh: Option<f64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Write the H0/H1 persistence diagram of the window as CSV.
    Diagram {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        window: Window,
        /// Project onto this many principal directions before computing distances.
        #[arg(long)]
        project: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct ClassifyRow {
    file: String,
    class: String,
    b0: Option<usize>,
    b1: Option<usize>,
    thresh: Option<f64>,
    diameter: f64,
}

const CLASSIFY_HEADER: [&str; 6] = ["file", "class", "b0", "b1", "thresh", "diameter"];

fn main() -> ExitCode {
    main_with(|cli: Cli| match cli.cmd {
        Cmd::Classify { input, window, alpha, ball_radius, thresh, report } => {
            let params = ClassifyParams { ball_radius, alpha, thresh };
            params.validate().map_err(|e| config_error(e.to_string()))?;
            let rows = input
                .par_iter()
                .map(|path| -> anyhow::Result<ClassifyRow> {
                    let traj = read_trajectory::<f64>(path)?.window(window.burn_in, window.end)?;
                    let c = classify(&traj, &params)?;
                    Ok(ClassifyRow {
                        file: path.display().to_string(),
                        class: c.class.to_string(),
                        b0: c.signature.map(|s| s.b0),
                        b1: c.signature.map(|s| s.b1),
                        thresh: c.signature.map(|s| s.thresh),
                        diameter: c.diameter,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            write_csv(&report, &CLASSIFY_HEADER, &rows)?;
            for r in &rows {
                eprintln!("{}: {}", r.file, r.class);
            }
            Ok(())
        }
        Cmd::Diagram { input, window, project, out } => {
            let traj = read_trajectory::<f64>(&input)?.window(window.burn_in, window.end)?;
            let cloud = PointCloud::try_from(&traj)?;
            let cloud = match project {
                Some(k) => svd_project(&cloud, k)?,
                None => cloud,
            };
            let diagram = rips_persistence(&distance_matrix(&cloud), 1)?;
            std::fs::write(&out, diagram.to_csv())?;
            eprintln!("{} bars", diagram.len());
            Ok(())
        }
    })
}
