//! Reference implementations used as test oracles. They favour obviousness
//! over speed and share no code with the library algorithms they check.
#![allow(dead_code)]

use extrap_core::maze::{Coord, LatticeMaze};
use extrap_core::tda::{Bar, DistanceMatrix, PersistenceDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(dim, birth, death)` triples, sorted.
pub type Triples = Vec<(usize, f64, f64)>;

pub fn sort_triples(mut t: Triples) -> Triples {
    t.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    t
}

/// Persistence in dimensions 0 and 1 by textbook reduction of the full
/// boundary matrix of every simplex with at most three vertices.
pub fn naive_rips_diagram(dmat: &DistanceMatrix<f64>) -> Triples {
    let n = dmat.size();
    let mut simplices: Vec<(f64, Vec<usize>)> = Vec::new();
    for a in 0..n {
        simplices.push((0.0, vec![a]));
        for b in a + 1..n {
            simplices.push((dmat.get(a, b), vec![a, b]));
            for c in b + 1..n {
                let v = dmat.get(a, b).max(dmat.get(a, c)).max(dmat.get(b, c));
                simplices.push((v, vec![a, b, c]));
            }
        }
    }
    simplices.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.len().cmp(&y.1.len())).then(x.1.cmp(&y.1)));
    let position: std::collections::HashMap<Vec<usize>, usize> =
        simplices.iter().enumerate().map(|(i, (_, s))| (s.clone(), i)).collect();

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|(_, s)| {
            let mut faces: Vec<usize> = if s.len() == 1 {
                vec![]
            } else {
                (0..s.len())
                    .map(|skip| {
                        let face: Vec<usize> =
                            s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                        position[&face]
                    })
                    .collect()
            };
            faces.sort_unstable();
            faces
        })
        .collect();

    let mut owner_of_low: std::collections::HashMap<usize, usize> = Default::default();
    let mut paired = vec![false; simplices.len()];
    let mut triples = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner_of_low.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            owner_of_low.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let dim = simplices[low].1.len() - 1;
            if simplices[j].0 > simplices[low].0 {
                triples.push((dim, simplices[low].0, simplices[j].0));
            }
        }
    }
    for (i, (value, s)) in simplices.iter().enumerate() {
        if !paired[i] && s.len() <= 2 {
            triples.push((s.len() - 1, *value, f64::INFINITY));
        }
    }
    sort_triples(triples)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::with_capacity(a.len() + b.len()));
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

/// Random clouds for oracle comparisons. Odd cases use small integer
/// coordinates so that many distances tie.
pub fn random_cloud(seed: u64) -> (usize, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=12);
    let dim = rng.random_range(2..=8);
    let data = if seed % 2 == 1 {
        (0..m * dim).map(|_| rng.random_range(0..3) as f64).collect()
    } else {
        (0..m * dim).map(|_| rng.random_range(-1.0..1.0)).collect()
    };
    (dim, data)
}

/// All-pairs shortest path lengths by repeated relaxation.
pub fn shortest_distance(maze: &LatticeMaze, from: Coord, to: Coord) -> Option<usize> {
    let nodes: Vec<Coord> = maze.nodes().collect();
    let idx = |c: Coord| nodes.iter().position(|&x| x == c).unwrap();
    let mut dist = vec![usize::MAX; nodes.len()];
    dist[idx(from)] = 0;
    loop {
        let mut changed = false;
        for (a, b) in maze.edges() {
            let (ia, ib) = (idx(a), idx(b));
            for (x, y) in [(ia, ib), (ib, ia)] {
                if dist[x] != usize::MAX && dist[x] + 1 < dist[y] {
                    dist[y] = dist[x] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let d = dist[idx(to)];
    (d != usize::MAX).then_some(d)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Multiset equality of two diagrams up to a relative tolerance on every
/// endpoint. Needed when tied distances are perturbed at rounding level,
/// which permutes bars of equal birth.
pub fn diagrams_match(a: &PersistenceDiagram<f64>, b: &PersistenceDiagram<f64>, rel: f64) -> bool {
    // Bars shorter than the tolerance are indistinguishable from the diagonal.
    let scale = a.bars().iter().chain(b.bars()).filter(|x| !x.is_essential()).fold(0.0f64, |m, x| m.max(x.death));
    let visible = |d: &PersistenceDiagram<f64>| -> Vec<Bar<f64>> {
        d.bars().iter().filter(|x| x.persistence() > rel * scale).copied().collect()
    };
    let (a, b) = (visible(a), visible(b));
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = b.iter().enumerate().position(|(i, y)| {
            !used[i] && x.dim == y.dim && close(x.birth, y.birth, rel) && close(x.death, y.death, rel)
        });
        hit.map(|i| used[i] = true).is_some()
    })
}
