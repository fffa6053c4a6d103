//! `dyn synth` writes synthetic latent trajectories; `dyn residuals` tabulates
//! the distances between consecutive iterates of a trajectory file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use extrap_cli::{config_error, main_with, write_csv};
use extrap_core::dynamics::{read_trajectory, synth, write_trajectory, SyntheticKind, SyntheticSpec};

#[derive(Parser)]
#[command(name = "dyn", about = "Synthetic latent trajectories and residuals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic trajectory in LTRJ format.
    Synth {
        #[arg(long)]
        kind: SyntheticKind,
        #[arg(long, default_value_t = 128)]
        dim: usize,
        /// Number of points.
        #[arg(long, default_value_t = 3401)]
        len: usize,
        /// Per-point noise standard deviation, in absolute units.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point or loop-plane separation (kind default if omitted).
        #[arg(long)]
        separation: Option<f64>,
        /// Loop radius (twoloop).
        #[arg(long)]
        radius: Option<f64>,
        /// Contraction factor per step (fixedpoint).
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write r_j = |u_{j+1} - u_j| as CSV columns j, residual.
    Residuals {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    main_with(|cli: Cli| match cli.cmd {
        Cmd::Synth { kind, dim, len, noise, seed, separation, radius, rate, out } => {
            let d = SyntheticSpec::new(kind);
            let spec = SyntheticSpec {
                dim,
                len,
                noise_sigma: noise,
                seed,
                separation: separation.unwrap_or(d.separation),
                radius: radius.unwrap_or(d.radius),
                rate: rate.unwrap_or(d.rate),
                ..d
            };
            spec.validate().map_err(|e| config_error(e.to_string()))?;
            let traj = synth::<f64>(&spec)?;
            write_trajectory(&traj, &out)?;
            eprintln!("wrote {} points of dim {} to {}", traj.len(), traj.dim(), out.display());
            Ok(())
        }
        Cmd::Residuals { input, out } => {
            let traj = read_trajectory::<f64>(&input)?;
            let series = traj.residuals();
            let rows: Vec<(usize, f64)> = series.values.iter().copied().enumerate().collect();
            write_csv(&out, &["j", "residual"], &rows)?;
            if let (Some(mean), Some(cv)) = (series.mean(), series.coefficient_of_variation()) {
                eprintln!("{} residuals, mean {mean:.6e}, coefficient of variation {cv:.4}", series.len());
            }
            Ok(())
        }
    })
}
