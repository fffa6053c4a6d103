//! Vietoris-Rips persistence in dimensions 0 and 1 over Z/2.
//!
//! Dimension 0 comes from Kruskal-style union-find over the edges in
//! filtration order. Dimension 1 comes from reducing the coboundary matrix of
//! the edges (columns in reverse filtration order, rows the triangles),
//! skipping the columns cleared by the dimension-0 pairing: an edge that merged
//! two components can never create a loop. The pairs are the same as those of
//! the triangle boundary matrix reduction; only the amount of work differs.
//!
//! Edges are ordered by `(length, i, j)` and each triangle follows its longest
//! edge, which refines the order by diameter. Pairs born and killed at the same
//! scale are not bars and are dropped.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{BuildHasher, Hasher};
use std::fmt::Write as _;

use crate::scalar::Scalar;

use super::{DistanceMatrix, Result, TdaError};

/// One persistence interval `[birth, death)`; `death` is infinite for
/// essential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar<T> {
    pub dim: usize,
    pub birth: T,
    pub death: T,
}

impl<T: Scalar> Bar<T> {
    pub fn persistence(&self) -> T {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.as_f64().total_cmp(&other.birth.as_f64()))
            .then(self.death.as_f64().total_cmp(&other.death.as_f64()))
    }
}

/// Multiset of bars, kept sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram<T> {
    bars: Vec<Bar<T>>,
}

impl<T: Scalar> PersistenceDiagram<T> {
    pub fn from_bars(mut bars: Vec<Bar<T>>) -> Self {
        bars.sort_unstable_by(Bar::canonical_cmp);
        Self { bars }
    }

    pub fn bars(&self) -> &[Bar<T>] {
        &self.bars
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Bar<T>> + '_ {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// CSV with header `dim,birth,death`; essential deaths are written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for b in &self.bars {
            if b.is_essential() {
                let _ = writeln!(out, "{},{},inf", b.dim, b.birth);
            } else {
                let _ = writeln!(out, "{},{},{}", b.dim, b.birth, b.death);
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("dim,birth,death") {
            return Err(TdaError::Parse("missing header dim,birth,death".into()));
        }
        let mut bars = Vec::new();
        for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let err = || TdaError::Parse(format!("line {}: '{line}'", lineno + 2));
            if fields.len() != 3 {
                return Err(err());
            }
            let dim = fields[0].parse().map_err(|_| err())?;
            let birth: f64 = fields[1].parse().map_err(|_| err())?;
            let death: f64 = if fields[2] == "inf" { f64::INFINITY } else { fields[2].parse().map_err(|_| err())? };
            bars.push(Bar { dim, birth: T::of(birth), death: T::of(death) });
        }
        Ok(Self::from_bars(bars))
    }
}

#[derive(Clone, Copy)]
struct Edge<T> {
    len: T,
    i: u32,
    j: u32,
}

/// Edges `i < j` sorted by `(length, i, j)`.
fn sorted_edges<T: Scalar>(dmat: &DistanceMatrix<T>) -> Vec<Edge<T>> {
    let n = dmat.size();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(Edge { len: dmat.get(i, j), i: i as u32, j: j as u32 });
        }
    }
    // Lengths are non-negative, so their bit patterns sort like the values;
    // the position breaks ties in `(i, j)` order.
    let mut keys: Vec<(u64, u32)> =
        edges.iter().enumerate().map(|(pos, e)| (e.len.as_f64().to_bits(), pos as u32)).collect();
    keys.sort_unstable();
    keys.into_iter().map(|(_, pos)| edges[pos as usize]).collect()
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Persistence diagram of the Rips filtration of `dmat`, up to `max_dim` (0 or 1).
///
/// The filtration runs to the full diameter, so the final complex is the full
/// simplex: one essential class in dimension 0 and none in dimension 1.
pub fn rips_persistence<T: Scalar>(dmat: &DistanceMatrix<T>, max_dim: usize) -> Result<PersistenceDiagram<T>> {
    if max_dim > 1 {
        return Err(TdaError::Param(format!("max_dim must be 0 or 1, got {max_dim}")));
    }
    let n = dmat.size();
    if (n as u64).pow(3) >= u64::MAX / 2 {
        return Err(TdaError::Param(format!("{n} points is too many")));
    }
    let edges = sorted_edges(dmat);
    let mut bars = Vec::with_capacity(if max_dim == 1 { edges.len() + 1 } else { n });

    // Dimension 0. Every vertex is born at 0, so a merge closes one bar at the
    // edge length whichever class is called the younger one.
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut cleared = vec![false; edges.len()];
    for (id, e) in edges.iter().enumerate() {
        let (ri, rj) = (find(&mut parent, e.i), find(&mut parent, e.j));
        if ri != rj {
            parent[ri.max(rj) as usize] = ri.min(rj);
            cleared[id] = true;
            if e.len > T::zero() {
                bars.push(Bar { dim: 0, birth: T::zero(), death: e.len });
            }
        }
    }
    bars.push(Bar { dim: 0, birth: T::zero(), death: T::infinity() });

    if max_dim == 1 {
        let triangles = Triangles::new(n, &edges);
        for (id, death) in reduce_coboundary(&triangles, &cleared) {
            let death = death.map_or(T::infinity(), |rank| edges[rank].len);
            if death > edges[id].len {
                bars.push(Bar { dim: 1, birth: edges[id].len, death });
            }
        }
    }
    Ok(PersistenceDiagram::from_bars(bars))
}

/// Hasher for integer keys: one folded 128-bit multiply.
#[derive(Clone, Copy, Default)]
struct KeyHash;

struct KeyHasher(u64);

impl BuildHasher for KeyHash {
    type Hasher = KeyHasher;

    fn build_hasher(&self) -> KeyHasher {
        KeyHasher(0)
    }
}

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        let m = (self.0 as u128).wrapping_mul(0x9E37_79B9_7F4A_7C15_F39C_C060_5CED_C835);
        (m >> 64) as u64 ^ m as u64
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    fn write_u32(&mut self, v: u32) {
        self.0 = v as u64;
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = v;
    }
}

/// Triangle keys. A triangle enters the filtration with its longest edge, so
/// ordering triangles by the rank of that edge (then by the opposite vertex)
/// refines the order by diameter and fits in one integer:
/// `rank * n + opposite`.
type TriangleKey = u64;

struct Triangles {
    n: usize,
    /// Rank of edge `{i, j}` in filtration order, at `i * n + j` and `j * n + i`.
    rank: Vec<u32>,
    /// Row `v` lists the other vertices by increasing rank of their edge to `v`.
    by_rank: Vec<u32>,
    ends: Vec<(u32, u32)>,
}

impl Triangles {
    fn new<T>(n: usize, edges: &[Edge<T>]) -> Self {
        let mut rank = vec![0u32; n * n];
        let mut by_rank = vec![0u32; n * n.saturating_sub(1)];
        let mut filled = vec![0usize; n];
        let width = n.saturating_sub(1);
        for (r, e) in edges.iter().enumerate() {
            let (i, j) = (e.i as usize, e.j as usize);
            rank[i * n + j] = r as u32;
            rank[j * n + i] = r as u32;
            by_rank[i * width + filled[i]] = e.j;
            by_rank[j * width + filled[j]] = e.i;
            filled[i] += 1;
            filled[j] += 1;
        }
        Self { n, rank, by_rank, ends: edges.iter().map(|e| (e.i, e.j)).collect() }
    }

    fn diameter_rank(key: TriangleKey, n: usize) -> usize {
        (key / n as u64) as usize
    }

    fn rank(&self, a: u32, b: u32) -> u32 {
        self.rank[a as usize * self.n + b as usize]
    }

    fn neighbours(&self, v: u32) -> &[u32] {
        let width = self.n - 1;
        &self.by_rank[v as usize * width..(v as usize + 1) * width]
    }

    /// Cofacets of edge `id` with key at least `floor`, in increasing order.
    fn cofacets_from(&self, id: usize, floor: TriangleKey) -> Cofacets {
        let (i, j) = self.ends[id];
        let n = self.n as u64;
        let r = id as u32;
        // Triangles whose longest edge is `id` have keys in [r n, (r + 1) n).
        let k = floor.saturating_sub(r as u64 * n).min(n) as u32;
        // The others are found along the rank-ordered neighbours of i and j,
        // starting from the first edge at least as long as `floor` allows.
        let min_rank = (floor / n).max(r as u64 + 1);
        let start = |v: u32| self.neighbours(v).partition_point(|&w| (self.rank(v, w) as u64) < min_rank) as u32;
        let mut c = Cofacets { i, j, r, k, pi: start(i), pj: start(j) };
        while c.peek(self).is_some_and(|key| key < floor) {
            c.next(self);
        }
        c
    }

    /// Smallest cofacet of edge `id`.
    fn smallest_cofacet(&self, id: usize) -> Option<TriangleKey> {
        self.cofacets_from(id, 0).peek(self)
    }
}

/// Ordered cursor over the cofacets of edge `{i, j}` of rank `r`: first the
/// triangles in which it is the longest edge (by third vertex), then a merge of
/// the triangles whose longest edge is `{i, k}` or `{j, k}` (by that rank).
#[derive(Clone, Copy)]
struct Cofacets {
    i: u32,
    j: u32,
    r: u32,
    /// Next third vertex for the first phase; `n` once exhausted.
    k: u32,
    /// Positions in the rank-ordered neighbours of `i` and `j`.
    pi: u32,
    pj: u32,
}

impl Cofacets {
    /// Advances `self.k` to the next vertex closing a triangle below rank `r`.
    fn settle_first(&mut self, t: &Triangles) {
        let n = t.n as u32;
        while self.k < n {
            let k = self.k;
            if k != self.i && k != self.j && t.rank(self.i, k) < self.r && t.rank(self.j, k) < self.r {
                return;
            }
            self.k += 1;
        }
    }

    /// Next key along the neighbours of `v` (partner `w`), advancing `pos`
    /// past vertices whose triangle is counted from the other side.
    fn settle_side(t: &Triangles, v: u32, w: u32, pos: &mut u32) -> Option<TriangleKey> {
        let list = t.neighbours(v);
        while let Some(&k) = list.get(*pos as usize) {
            if k != w {
                let rv = t.rank(v, k);
                if rv > t.rank(w, k) {
                    return Some(rv as u64 * t.n as u64 + w as u64);
                }
            }
            *pos += 1;
        }
        None
    }

    fn peek(&mut self, t: &Triangles) -> Option<TriangleKey> {
        self.settle_first(t);
        if self.k < t.n as u32 {
            return Some(self.r as u64 * t.n as u64 + self.k as u64);
        }
        let a = Self::settle_side(t, self.i, self.j, &mut self.pi);
        let b = Self::settle_side(t, self.j, self.i, &mut self.pj);
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    fn next(&mut self, t: &Triangles) -> Option<TriangleKey> {
        let key = self.peek(t)?;
        if self.k < t.n as u32 {
            self.k += 1;
        } else if key % t.n as u64 == self.j as u64 {
            self.pi += 1;
        } else {
            self.pj += 1;
        }
        Some(key)
    }
}

/// Working coboundary column: a sum of edge coboundaries merged in key order.
#[derive(Default)]
struct WorkingColumn {
    /// `(key, stream)`
    heap: BinaryHeap<Reverse<(TriangleKey, u32)>>,
    streams: Vec<Cofacets>,
}

impl WorkingColumn {
    fn clear(&mut self) {
        self.heap.clear();
        self.streams.clear();
    }

    /// Adds the coboundary of `edge`, skipping keys below `floor`.
    fn add(&mut self, t: &Triangles, edge: usize, floor: TriangleKey) {
        let mut stream = t.cofacets_from(edge, floor);
        if let Some(first) = stream.peek(t) {
            self.heap.push(Reverse((first, self.streams.len() as u32)));
            self.streams.push(stream);
        }
    }

    /// Moves stream `s` past its current key.
    fn advance(&mut self, t: &Triangles, s: u32) {
        let stream = &mut self.streams[s as usize];
        stream.next(t);
        if let Some(key) = stream.peek(t) {
            self.heap.push(Reverse((key, s)));
        }
    }

    /// Smallest key of odd multiplicity. It stays in the column; keys of even
    /// multiplicity below it are dropped.
    fn pivot(&mut self, t: &Triangles) -> Option<TriangleKey> {
        loop {
            let Reverse((key, first)) = self.heap.pop()?;
            let mut odd = true;
            let mut last = first;
            while let Some(&Reverse((k, s))) = self.heap.peek() {
                if k != key {
                    break;
                }
                self.heap.pop();
                self.advance(t, last);
                last = s;
                odd = !odd;
            }
            if odd {
                self.heap.push(Reverse((key, last)));
                return Some(key);
            }
            self.advance(t, last);
        }
    }
}

/// Dimension-1 pairs from the edge coboundary matrix with clearing, as
/// `(birth edge rank, death edge rank)`; `None` marks an essential class.
fn reduce_coboundary(triangles: &Triangles, cleared: &[bool]) -> Vec<(usize, Option<usize>)> {
    let n = triangles.n;
    // pivot triangle -> edge whose reduced column has that pivot
    let mut pivots: HashMap<TriangleKey, u32, KeyHash> = HashMap::with_capacity_and_hasher(cleared.len(), KeyHash);
    // reduction chains (edge ids) of the columns that needed reducing; the rest are just the edge
    let mut chains: HashMap<u32, Vec<u32>, KeyHash> = HashMap::with_hasher(KeyHash);
    let mut pairs = Vec::with_capacity(cleared.len());
    let mut column = WorkingColumn::default();

    for id in (0..cleared.len()).rev().filter(|&id| !cleared[id]) {
        let Some(first) = triangles.smallest_cofacet(id) else {
            pairs.push((id, None));
            continue;
        };
        if let Entry::Vacant(slot) = pivots.entry(first) {
            slot.insert(id as u32);
            pairs.push((id, Some(Triangles::diameter_rank(first, n))));
            continue;
        }

        column.clear();
        column.add(triangles, id, first);
        let mut chain = vec![id as u32];
        loop {
            let Some(pivot) = column.pivot(triangles) else {
                pairs.push((id, None));
                break;
            };
            match pivots.get(&pivot) {
                Some(&other) => {
                    let other = chains.get(&other).map_or(std::slice::from_ref(&other), Vec::as_slice);
                    // The coboundary of `other` vanishes below its pivot, so
                    // its keys under `pivot` cancel among themselves.
                    for &added in other {
                        column.add(triangles, added as usize, pivot);
                    }
                    chain.extend_from_slice(other);
                }
                None => {
                    chain.sort_unstable();
                    let mut reduced: Vec<u32> = Vec::with_capacity(chain.len());
                    for &c in &chain {
                        if reduced.last() == Some(&c) {
                            reduced.pop();
                        } else {
                            reduced.push(c);
                        }
                    }
                    pivots.insert(pivot, id as u32);
                    chains.insert(id as u32, reduced);
                    pairs.push((id, Some(Triangles::diameter_rank(pivot, n))));
                    break;
                }
            }
        }
    }
    pairs
}
