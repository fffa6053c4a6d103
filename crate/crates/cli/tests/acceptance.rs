//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use common::{naive_rips_diagram, random_cloud, sort_triples, Triples};
use extrap_core::dynamics::{synth, SyntheticKind, SyntheticSpec, Trajectory};
use extrap_core::exp::{run_size_sweep, run_tda_batch, sample_maze, ExperimentConfig, TdaSource};
use extrap_core::maze::{gen_dfs, percolate, raster_side, rasterize, LatticeMaze};
use extrap_core::solver::{AccuracyRecord, Algo};
use extrap_core::tda::{
    classify, distance_matrix, persistent_betti, rips_persistence, svd_project, BehaviourClass, ClassifyParams,
    PersistenceDiagram, PointCloud,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took < limit {
        Ok(())
    } else {
        Err(format!("took {:.2} s, limit {:.0} s", took.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn triples(d: &PersistenceDiagram<f64>) -> Triples {
    sort_triples(d.bars().iter().map(|b| (b.dim, b.birth, b.death)).collect())
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn brute_diameter(points: &[Vec<f64>]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(euclid(&points[i], &points[j]));
        }
    }
    d
}

/// Union-find verdict on an edge list: (components, any edge closing a cycle).
fn union_find(nodes: usize, edges: impl Iterator<Item = (usize, usize)>) -> (usize, bool) {
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..nodes).collect();
    let (mut components, mut cycle) = (nodes, false);
    for (a, b) in edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            cycle = true;
        } else {
            parent[ra] = rb;
            components -= 1;
        }
    }
    (components, cycle)
}

fn homology_oracle_equivalence() -> Check {
    let start = Instant::now();
    for seed in 0..200 {
        let (dim, data) = random_cloud(seed);
        ensure!((2..=8).contains(&dim) && data.len() / dim <= 12, "cloud {seed} out of range");
        let dmat = distance_matrix(&PointCloud::new(dim, data).unwrap());
        let fast = triples(&rips_persistence(&dmat, 1).unwrap());
        let slow = naive_rips_diagram(&dmat);
        ensure!(fast == slow, "cloud {seed}: {fast:?} vs oracle {slow:?}");
    }
    within(start, Duration::from_secs(10))?;
    Ok("200 clouds identical".into())
}

fn canonical_diagrams() -> Check {
    let start = Instant::now();
    let square = PointCloud::from_points(&[[0.0f64, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    let d = rips_persistence(&distance_matrix(&square), 1).unwrap();
    let h1: Vec<_> = d.in_dim(1).collect();
    ensure!(h1.len() == 1, "unit square H1 = {h1:?}");
    ensure!(
        (h1[0].birth - 1.0).abs() <= 1e-12 && (h1[0].death - 2f64.sqrt()).abs() <= 1e-12,
        "unit square bar {:?}",
        h1[0]
    );

    let pair = PointCloud::from_points(&[[0.0f64, 0.0], [1.0, 0.0]]).unwrap();
    let d = rips_persistence(&distance_matrix(&pair), 1).unwrap();
    let h0 = triples(&d);
    ensure!(h0 == vec![(0, 0.0, 1.0), (0, 0.0, f64::INFINITY)], "two points: {h0:?}");

    let circle: Vec<[f64; 2]> = (0..20).map(|i| 2.0 * PI * i as f64 / 20.0).map(|t| [t.cos(), t.sin()]).collect();
    let dmat = distance_matrix(&PointCloud::from_points(&circle).unwrap());
    let d = rips_persistence(&dmat, 1).unwrap();
    let thresh = ClassifyParams::default().resolve_thresh(dmat.diameter());
    ensure!((thresh - 0.5).abs() < 1e-12, "default threshold {thresh}");
    let long = d.in_dim(1).filter(|b| b.persistence() > thresh).count();
    ensure!(long == 1, "circle has {long} H1 bars above {thresh}");
    ensure!(persistent_betti(&d, thresh).counts() == [1, 1], "circle Betti numbers");
    within(start, Duration::from_secs(1))?;
    Ok("square, pair and circle".into())
}

fn synthetic_classification() -> Check {
    let start = Instant::now();
    let mut sources = Vec::new();
    for noisy in [false, true] {
        for kind in SyntheticKind::ALL {
            let mut spec = SyntheticSpec { dim: 128, len: 3401, seed: 17, ..SyntheticSpec::new(kind) };
            if noisy {
                spec.noise_sigma = 0.05 * spec.scale();
            }
            let group = format!("{kind}-{}", if noisy { "noisy" } else { "clean" });
            sources.push(TdaSource::Synthetic { group: Some(group), count: 100, spec });
        }
    }
    let config = ExperimentConfig { seed: 2024, ..Default::default() };
    ensure!(config.tda.end + 1 - config.tda.burn_in == 400, "window is not 400 points");
    let batch = run_tda_batch(&config, &sources).map_err(|e| e.to_string())?;
    let rows = batch.report.frequency_rows().unwrap();
    let mut summary = Vec::new();
    for (row, source) in rows.iter().zip(&sources) {
        let TdaSource::Synthetic { spec, .. } = source else { unreachable!() };
        let counts = row.counts();
        let hit = match spec.kind {
            SyntheticKind::FixedPoint => counts[0],
            SyntheticKind::TwoPoint => counts[1],
            SyntheticKind::TwoLoop => counts[2],
        };
        let needed = if spec.noise_sigma == 0.0 { 100 } else { 99 };
        ensure!(row.samples == 100 && row.errors == 0, "{}: {row:?}", row.group);
        ensure!(hit >= needed, "{}: {hit}/100 correct, counts {counts:?}", row.group);
        summary.push(format!("{} {hit}", row.group));
    }
    within(start, Duration::from_secs(60))?;
    Ok(summary.join(", "))
}

/// Structured clouds (clusters, loops, pairs of loops, noise) shrunk to a
/// diameter of at most 0.02.
fn micro_cloud(case: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(case);
    let dim = [2, 3, 8, 32, 128][case as usize % 5];
    let m = rng.random_range(10..=400);
    let mut gauss = || -> f64 { rng.sample(StandardNormal) };
    let shape = case % 5;
    let mut points: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let t = 2.0 * PI * j as f64 * 0.618_033_988_749_894_8;
            let mut p = vec![0.0; dim];
            match shape {
                0 => p[0] = (j % 2) as f64,
                1 => (p[0], p[1]) = (t.cos(), t.sin()),
                2 => {
                    (p[0], p[1]) = (t.cos(), t.sin());
                    if dim > 2 {
                        p[2] = 3.0 * (j % 2) as f64;
                    } else {
                        p[0] += 3.0 * (j % 2) as f64;
                    }
                }
                3 => p.iter_mut().for_each(|x| *x = gauss()),
                _ => p[0] = j as f64,
            }
            p
        })
        .collect();
    let diam = brute_diameter(&points);
    // Half the cases sit exactly on the boundary, the rest strictly inside.
    let target = if case.is_multiple_of(2) { 0.02 } else { 0.02 * (0.1 + 0.8 * (case as f64 / 50.0)) };
    let mut s = target / diam;
    loop {
        let scaled: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|x| x * s).collect()).collect();
        if brute_diameter(&scaled) <= 0.02 {
            points = scaled;
            break;
        }
        s *= 1.0 - 1e-15;
    }
    points
}

fn ball_rule() -> Check {
    let params = ClassifyParams::default();
    let mut structured = 0;
    for case in 0..50 {
        let points = micro_cloud(case);
        let diam = brute_diameter(&points);
        ensure!(diam <= 0.02, "case {case}: diameter {diam}");
        let traj = Trajectory::from_points(&points).unwrap();
        let c = classify(&traj, &params).map_err(|e| e.to_string())?;
        ensure!(c.class == BehaviourClass::FixedPoint, "case {case} (diameter {diam}): {}", c.class);
        let big: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|x| x * 1e3).collect()).collect();
        if classify(&Trajectory::from_points(&big).unwrap(), &params).unwrap().class != BehaviourClass::FixedPoint {
            structured += 1;
        }
    }
    Ok(format!("50 clouds, {structured} of them non-trivial when enlarged"))
}

fn maze_structure() -> Check {
    let mut resampled = 0;
    for grid_n in 2..=25 {
        for seed in 0..100u64 {
            let tree = gen_dfs(grid_n, seed).unwrap();
            let index = |c: extrap_core::maze::Coord| c.row * grid_n + c.col;
            let edges: Vec<_> = tree.edges().map(|(a, b)| (index(a), index(b))).collect();
            ensure!(edges.len() == grid_n * grid_n - 1, "grid {grid_n} seed {seed}: {} edges", edges.len());
            let (components, cycle) = union_find(grid_n * grid_n, edges.into_iter());
            ensure!(components == 1 && !cycle, "grid {grid_n} seed {seed}: not a spanning tree");

            let sampled = sample_maze(seed, raster_side(grid_n), grid_n, 0.0, true, seed as usize)
                .map_err(|e| e.to_string())?;
            resampled += sampled.attempts - 1;
            let inst = sampled.instance;
            let degree = inst.maze.degree(inst.endpoints.start);
            ensure!(degree == 1, "grid {grid_n} seed {seed}: start degree {degree}");
            let side = rasterize(&inst.maze, &inst.endpoints).unwrap().side();
            ensure!(side == 2 * grid_n - 1, "grid {grid_n}: raster side {side}");
        }
    }
    Ok(format!("2400 mazes, {resampled} endpoint resamples"))
}

fn percolation_statistics() -> Check {
    let (grid_n, p, count) = (5, 0.2, 1000);
    let walls = 2 * grid_n * (grid_n - 1) - (grid_n * grid_n - 1);
    ensure!(walls == 16, "{walls} walls");
    let mut added = Vec::with_capacity(count);
    for seed in 0..count as u64 {
        let tree = gen_dfs(grid_n, seed).unwrap();
        let perc = percolate(&tree, p, seed ^ 0x5eed).unwrap();
        ensure!(tree.edges().all(|(a, b)| perc.has_edge(a, b)), "seed {seed}: tree edge removed");
        added.push((perc.edge_count() - tree.edge_count()) as f64);
        ensure!(percolate(&tree, 0.0, seed).unwrap() == tree, "seed {seed}: p = 0 changed the maze");
        ensure!(percolate(&tree, 1.0, seed).unwrap() == LatticeMaze::full(grid_n).unwrap(), "seed {seed}: p = 1");
    }
    let mean = added.iter().sum::<f64>() / count as f64;
    let var = added.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (count - 1) as f64;
    let (mu, sigma2) = (walls as f64 * p, walls as f64 * p * (1.0 - p));
    let z = (mean - mu) / (sigma2 / count as f64).sqrt();
    ensure!(z.abs() <= 3.0, "mean added edges {mean}, binomial mean {mu}, z = {z:.2}");
    Ok(format!("mean {mean:.3} (expected {mu}), variance {var:.3} (expected {sigma2:.2}), z = {z:.2}"))
}

fn solver_reproduction() -> Check {
    let start = Instant::now();
    let sizes = vec![9, 19, 29, 39, 49];
    for solver in [Algo::Bfs, Algo::Deadend] {
        let config = ExperimentConfig { sizes: sizes.clone(), mazes_per_size: 100, solver, seed: 7, ..Default::default() };
        let report = run_size_sweep(&config).map_err(|e| e.to_string())?;
        for row in report.accuracy_rows().unwrap() {
            ensure!(row.samples == 100 && row.accuracy == 1.0, "{solver} at n = {}: {row:?}", row.n);
        }
    }
    let mut cyclic = 0;
    for &n in &sizes {
        let grid_n = n.div_ceil(2);
        for p in [0.02, 0.05, 0.1, 0.2, 0.5, 1.0] {
            for index in 0..100 {
                let m = sample_maze(11, n, grid_n, p, false, index).map_err(|e| e.to_string())?;
                if !m.instance.maze.has_cycle() {
                    continue;
                }
                cyclic += 1;
                let r = AccuracyRecord::evaluate(&m.id, &m.instance, Algo::Deadend).map_err(|e| e.to_string())?;
                ensure!(r.has_cycle && r.accuracy == 0, "{}: dead-end fill solved a maze with a loop", m.id);
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("bfs and dead-end fill exact at p = 0; dead-end fill 0 on {cyclic} cyclic mazes"))
}

fn residual_cv(spec: SyntheticSpec) -> f64 {
    let traj = synth::<f64>(&spec).unwrap().window(3001, 3400).unwrap();
    let r = &traj.residuals().values;
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    let sd = (r.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r.len() - 1) as f64).sqrt();
    sd / mean
}

fn residual_signatures() -> Check {
    let two_point = residual_cv(SyntheticSpec { dim: 128, len: 3401, ..SyntheticSpec::new(SyntheticKind::TwoPoint) });
    ensure!(two_point < 0.01, "two-point coefficient of variation {two_point}");
    let loops = SyntheticSpec::new(SyntheticKind::TwoLoop);
    let two_loop = residual_cv(SyntheticSpec { dim: 128, len: 3401, radius: loops.separation / 2.0, ..loops });
    ensure!(two_loop > 0.05, "two-loop coefficient of variation {two_loop}");
    Ok(format!("cv two-point {two_point:.2e}, two-loop {two_loop:.3}"))
}

fn distance_preserving_projection() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..100 {
        let m = rng.random_range(2..=12);
        let dim = rng.random_range(m..=m + 40);
        let points: Vec<Vec<f64>> =
            (0..m).map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) * 3.0 + 1.0).collect()).collect();
        let cloud = PointCloud::from_points(&points).unwrap();
        let projected = svd_project(&cloud, m).map_err(|e| e.to_string())?;
        ensure!(projected.dim() == m, "case {case}: projected dim {}", projected.dim());
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (euclid(&points[i], &points[j]), euclid(projected.point(i), projected.point(j)));
                ensure!((a - b).abs() <= 1e-9 * a, "case {case}: distance {a} became {b}");
            }
        }
        let before = triples(&rips_persistence(&distance_matrix(&cloud), 1).unwrap());
        let after = triples(&rips_persistence(&distance_matrix(&projected), 1).unwrap());
        let same = before.len() == after.len()
            && before.iter().zip(&after).all(|(x, y)| {
                x.0 == y.0
                    && (x.1 - y.1).abs() <= 1e-9 * x.1.max(1.0)
                    && (x.2 == y.2 || (x.2 - y.2).abs() <= 1e-9 * x.2)
            });
        ensure!(same, "case {case}: {before:?} vs {after:?}");
    }
    Ok("100 clouds with k = point count".into())
}

fn run(dir: &Path, bin: &str, args: &[&str]) -> Result<(), String> {
    let out = Command::new(bin).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{bin} {args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn all_files(dir: &Path, out: &mut Vec<std::path::PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            all_files(&path, out);
        } else {
            out.push(path);
        }
    }
}

fn cli_session(dir: &Path) -> Result<(), String> {
    let (maze, dynm, tda, exp) = (
        env!("CARGO_BIN_EXE_maze"),
        env!("CARGO_BIN_EXE_dyn"),
        env!("CARGO_BIN_EXE_tda"),
        env!("CARGO_BIN_EXE_exp"),
    );
    let ppm = ["--deadend-start", "false", "--count", "30", "--seed", "5", "--out", "mazes"];
    run(dir, maze, &[&["gen", "--grid-n", "7", "--p", "0.1"][..], &ppm].concat())?;
    for algo in ["bfs", "deadend"] {
        let report = format!("solve-{algo}.csv");
        run(dir, maze, &["solve", "--algo", algo, "--in", "mazes/inputs", "--labels", "mazes/labels", "--report", &report])?;
    }
    for (kind, noise) in [("fixedpoint", "0.05"), ("twopoint", "0.05"), ("twoloop", "0.05")] {
        let file = format!("{kind}.ltrj");
        run(dir, dynm, &["synth", "--kind", kind, "--dim", "32", "--len", "800", "--noise", noise, "--seed", "3", "--out", &file])?;
        run(dir, dynm, &["residuals", "--in", &file, "--out", &format!("{kind}-residuals.csv")])?;
    }
    let window = ["--burn-in", "400", "--end", "799"];
    let inputs = ["--in", "fixedpoint.ltrj", "twopoint.ltrj", "twoloop.ltrj"];
    run(dir, tda, &[&["classify"][..], &inputs, &window, &["--report", "classify.csv"]].concat())?;
    run(dir, tda, &[&["diagram", "--in", "twoloop.ltrj"][..], &window, &["--out", "diagram.csv"]].concat())?;
    let sweep = ["--seed", "9", "--sizes", "9,19", "--mazes-per-size", "40"];
    run(dir, exp, &[&["size-sweep", "--out", "size"][..], &sweep].concat())?;
    run(dir, exp, &[&["percolation", "--out", "perc", "--p-values", "0,0.1,1"][..], &sweep].concat())?;
    run(dir, exp, &[&["neighbors", "--out", "nb"][..], &sweep].concat())?;
    let config = r#"{"seed": 3, "tda": {"burn_in": 200, "end": 599},
        "sources": [{"source": "synthetic", "count": 6, "spec": {"kind": "twoloop", "dim": 16, "len": 600, "noise_sigma": 0.02}}]}"#;
    fs::write(dir.join("tda.json"), config).map_err(|e| e.to_string())?;
    run(dir, exp, &["tda-batch", "--config", "tda.json", "--files", "*.ltrj", "--out", "batch", "--burn-in", "400", "--end", "599"])?;
    Ok(())
}

fn determinism() -> Check {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [root.path().join("first"), root.path().join("second")];
    let mut listings = Vec::new();
    for dir in &runs {
        fs::create_dir(dir).map_err(|e| e.to_string())?;
        cli_session(dir)?;
        let mut files = Vec::new();
        all_files(dir, &mut files);
        let mut rel: Vec<_> = files.iter().map(|f| f.strip_prefix(dir).unwrap().to_path_buf()).collect();
        rel.sort();
        listings.push(rel);
    }
    ensure!(listings[0] == listings[1], "runs produced different file sets");
    let csv = listings[0].iter().filter(|f| f.extension().is_some_and(|e| e == "csv")).count();
    ensure!(csv >= 12, "only {csv} CSV files produced");
    for rel in &listings[0] {
        let (a, b) = (fs::read(runs[0].join(rel)).unwrap(), fs::read(runs[1].join(rel)).unwrap());
        ensure!(a == b, "{} differs between runs", rel.display());
    }
    Ok(format!("{} files ({csv} CSV) byte-identical across two runs", listings[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("homology oracle equivalence", homology_oracle_equivalence),
        ("canonical diagrams", canonical_diagrams),
        ("synthetic classification", synthetic_classification),
        ("ball rule", ball_rule),
        ("maze structure", maze_structure),
        ("percolation statistics", percolation_statistics),
        ("solver qualitative reproduction", solver_reproduction),
        ("residual signatures", residual_signatures),
        ("distance-preserving projection", distance_preserving_projection),
        ("determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2} s] {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2} s] {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
