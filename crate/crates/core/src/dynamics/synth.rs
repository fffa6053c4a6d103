//! Ground-truth generators for the three limiting behaviours.
//!
//! Every kind is built in a three-dimensional construction space and mapped
//! into `R^dim` through a seeded random orthonormal frame. Noise is isotropic
//! Gaussian in the full latent space with per-coordinate variance
//! `noise_sigma^2 / dim`, so `noise_sigma` is the RMS length of the
//! perturbation regardless of `dim`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{DynError, Result, Trajectory};
use crate::rng::{self, StreamRng};
use crate::scalar::Scalar;

/// Angle advanced per visit of a loop: `2 pi (sqrt(5) - 1) / 2`. An irrational
/// fraction of a turn, so finite samples never repeat and fill the loop.
pub const LOOP_ANGLE_STEP: f64 = 2.0 * PI * 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntheticKind {
    /// Geometric contraction onto a single point.
    FixedPoint,
    /// Alternation between two points.
    TwoPoint,
    /// Alternation between two separated loops, each traversed by its own iterates.
    TwoLoop,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 3] = [SyntheticKind::FixedPoint, SyntheticKind::TwoPoint, SyntheticKind::TwoLoop];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::FixedPoint => "fixedpoint",
            SyntheticKind::TwoPoint => "twopoint",
            SyntheticKind::TwoLoop => "twoloop",
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyntheticKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "fixedpoint" => Ok(SyntheticKind::FixedPoint),
            "twopoint" => Ok(SyntheticKind::TwoPoint),
            "twoloop" => Ok(SyntheticKind::TwoLoop),
            _ => Err(format!("unknown synthetic kind '{s}' (expected fixedpoint, twopoint or twoloop)")),
        }
    }
}

/// Parameters of a synthetic trajectory. Only the fields relevant to `kind`
/// are used. Fields missing from serialized input take the defaults of
/// [`SyntheticSpec::new`] for the given kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PartialSpec")]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub dim: usize,
    /// Number of points generated.
    pub len: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    /// FixedPoint: contraction factor per step.
    pub rate: f64,
    /// FixedPoint: distance of `u_0` from the fixed point.
    pub offset: f64,
    /// TwoPoint: distance between the two points. TwoLoop: distance between the loop planes.
    pub separation: f64,
    /// TwoLoop: loop radius.
    pub radius: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            kind: SyntheticKind::FixedPoint,
            dim: 128,
            len: 3401,
            noise_sigma: 0.0,
            seed: 0,
            rate: 0.9,
            offset: 1.0,
            separation: 2.0,
            radius: 1.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialSpec {
    #[serde(default = "default_kind")]
    kind: SyntheticKind,
    dim: Option<usize>,
    len: Option<usize>,
    noise_sigma: Option<f64>,
    seed: Option<u64>,
    rate: Option<f64>,
    offset: Option<f64>,
    separation: Option<f64>,
    radius: Option<f64>,
}

fn default_kind() -> SyntheticKind {
    SyntheticKind::FixedPoint
}

impl From<PartialSpec> for SyntheticSpec {
    fn from(p: PartialSpec) -> Self {
        let d = SyntheticSpec::new(p.kind);
        Self {
            kind: p.kind,
            dim: p.dim.unwrap_or(d.dim),
            len: p.len.unwrap_or(d.len),
            noise_sigma: p.noise_sigma.unwrap_or(d.noise_sigma),
            seed: p.seed.unwrap_or(d.seed),
            rate: p.rate.unwrap_or(d.rate),
            offset: p.offset.unwrap_or(d.offset),
            separation: p.separation.unwrap_or(d.separation),
            radius: p.radius.unwrap_or(d.radius),
        }
    }
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind) -> Self {
        let separation = if kind == SyntheticKind::TwoPoint { 1.0 } else { 2.0 };
        Self { kind, separation, ..Self::default() }
    }

    /// Characteristic length of the construction: offset, point separation or loop radius.
    pub fn scale(&self) -> f64 {
        match self.kind {
            SyntheticKind::FixedPoint => self.offset,
            SyntheticKind::TwoPoint => self.separation,
            SyntheticKind::TwoLoop => self.radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DynError::Spec(msg));
        if self.dim == 0 {
            return bad("dim must be positive".into());
        }
        if self.kind == SyntheticKind::TwoLoop && self.dim < 3 {
            return bad(format!("twoloop needs dim >= 3, got {}", self.dim));
        }
        if self.len == 0 {
            return bad("len must be positive".into());
        }
        for (name, v) in [
            ("noise_sigma", self.noise_sigma),
            ("offset", self.offset),
            ("separation", self.separation),
            ("radius", self.radius),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !(0.0..1.0).contains(&self.rate.abs()) {
            return bad(format!("rate must satisfy |rate| < 1, got {}", self.rate));
        }
        Ok(())
    }
}

/// Seeded orthonormal frame of `k` vectors in `R^dim` (Gram-Schmidt on Gaussian draws).
fn random_frame(rng: &mut StreamRng, dim: usize, k: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
    while frame.len() < k {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for e in &frame {
            let dot: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(e).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|a| *a /= norm);
            frame.push(v);
        }
    }
    frame
}

fn embed(frame: &[Vec<f64>], coords: [f64; 3], out: &mut [f64]) {
    out.fill(0.0);
    for (axis, &c) in frame.iter().zip(&coords) {
        if c != 0.0 {
            out.iter_mut().zip(axis).for_each(|(o, a)| *o += c * a);
        }
    }
}

fn add_noise(rng: &mut StreamRng, sigma: f64, out: &mut [f64]) {
    if sigma > 0.0 {
        let per_coord = sigma / (out.len() as f64).sqrt();
        for o in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *o += per_coord * z;
        }
    }
}

/// Generates a synthetic trajectory of `spec.len` points.
///
/// * FixedPoint: `u_{j+1} = rate * u_j + noise`, fixed point at the origin,
///   `u_0` at distance `offset`. The noise is scaled by `|u_j| / offset`, which
///   perturbs the map while keeping the origin a fixed point.
/// * TwoPoint: even iterates at `-separation/2 e1`, odd at `+separation/2 e1`, plus noise.
/// * TwoLoop: even iterates advance around a circle of `radius` in the plane
///   `e3 = -separation/2`, odd iterates go the other way around a congruent circle
///   in the plane `e3 = +separation/2`, plus noise.
pub fn synth<T: Scalar>(spec: &SyntheticSpec) -> Result<Trajectory<T>> {
    spec.validate()?;
    let dim = spec.dim;
    let mut frame_rng = rng::stream(rng::mix(spec.seed, 0));
    let mut noise_rng = rng::stream(rng::mix(spec.seed, 1));
    let frame = random_frame(&mut frame_rng, dim, dim.min(3));
    let mut data = Vec::with_capacity(spec.len * dim);
    let mut point = vec![0.0f64; dim];

    match spec.kind {
        SyntheticKind::FixedPoint => {
            embed(&frame, [spec.offset, 0.0, 0.0], &mut point);
            data.extend(point.iter().map(|&x| T::of(x)));
            for _ in 1..spec.len {
                let dist = point.iter().map(|x| x * x).sum::<f64>().sqrt();
                point.iter_mut().for_each(|x| *x *= spec.rate);
                if spec.offset > 0.0 {
                    add_noise(&mut noise_rng, spec.noise_sigma * dist / spec.offset, &mut point);
                }
                data.extend(point.iter().map(|&x| T::of(x)));
            }
        }
        SyntheticKind::TwoPoint => {
            let half = spec.separation / 2.0;
            for j in 0..spec.len {
                let side = if j % 2 == 0 { -half } else { half };
                embed(&frame, [side, 0.0, 0.0], &mut point);
                add_noise(&mut noise_rng, spec.noise_sigma, &mut point);
                data.extend(point.iter().map(|&x| T::of(x)));
            }
        }
        SyntheticKind::TwoLoop => {
            let phase_a = frame_rng.random::<f64>() * 2.0 * PI;
            let phase_b = frame_rng.random::<f64>() * 2.0 * PI;
            let half = spec.separation / 2.0;
            for j in 0..spec.len {
                let visit = (j / 2) as f64;
                let (angle, height) = if j % 2 == 0 {
                    (phase_a + visit * LOOP_ANGLE_STEP, -half)
                } else {
                    (phase_b - visit * LOOP_ANGLE_STEP, half)
                };
                embed(&frame, [spec.radius * angle.cos(), spec.radius * angle.sin(), height], &mut point);
                add_noise(&mut noise_rng, spec.noise_sigma, &mut point);
                data.extend(point.iter().map(|&x| T::of(x)));
            }
        }
    }
    Trajectory::new(dim, data)
}
