use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MazeError, Result};

/// Lattice node `(row, col)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn manhattan(self, other: Coord) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    pub fn is_adjacent(self, other: Coord) -> bool {
        self.manhattan(other) == 1
    }

    /// Neighbour in direction `dir`, if it stays inside a `grid_n` lattice.
    pub fn step(self, dir: Direction, grid_n: usize) -> Option<Coord> {
        let Coord { row, col } = self;
        match dir {
            Direction::North => row.checked_sub(1).map(|r| Coord::new(r, col)),
            Direction::East => (col + 1 < grid_n).then(|| Coord::new(row, col + 1)),
            Direction::South => (row + 1 < grid_n).then(|| Coord::new(row + 1, col)),
            Direction::West => col.checked_sub(1).map(|c| Coord::new(row, c)),
        }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    /// Fixed expansion order N, E, S, W.
    pub const ALL: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];
}

/// Undirected subgraph of the `grid_n x grid_n` lattice.
///
/// Edges are stored as two wall/passage bitmaps: `horizontal[r * (grid_n - 1) + c]`
/// joins `(r, c)` and `(r, c + 1)`, `vertical[r * grid_n + c]` joins `(r, c)` and
/// `(r + 1, c)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMaze {
    grid_n: usize,
    horizontal: Vec<bool>,
    vertical: Vec<bool>,
}

impl LatticeMaze {
    /// Lattice with no edges.
    pub fn empty(grid_n: usize) -> Result<Self> {
        if grid_n == 0 {
            return Err(MazeError::GridSize(0));
        }
        let slots = grid_n * (grid_n - 1);
        Ok(Self { grid_n, horizontal: vec![false; slots], vertical: vec![false; slots] })
    }

    /// Complete lattice, `2 * grid_n * (grid_n - 1)` edges.
    pub fn full(grid_n: usize) -> Result<Self> {
        let mut m = Self::empty(grid_n)?;
        m.horizontal.fill(true);
        m.vertical.fill(true);
        Ok(m)
    }

    pub fn from_edges<I: IntoIterator<Item = (Coord, Coord)>>(grid_n: usize, edges: I) -> Result<Self> {
        let mut m = Self::empty(grid_n)?;
        for (a, b) in edges {
            m.set_edge(a, b, true)?;
        }
        Ok(m)
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn node_count(&self) -> usize {
        self.grid_n * self.grid_n
    }

    /// Maximum possible number of edges on this lattice.
    pub fn lattice_edge_count(&self) -> usize {
        2 * self.grid_n * (self.grid_n - 1)
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.row < self.grid_n && c.col < self.grid_n
    }

    pub fn index(&self, c: Coord) -> usize {
        c.row * self.grid_n + c.col
    }

    pub fn coord(&self, index: usize) -> Coord {
        Coord::new(index / self.grid_n, index % self.grid_n)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.node_count()).map(|i| self.coord(i))
    }

    fn slot(&self, a: Coord, b: Coord) -> Option<(bool, usize)> {
        if !self.contains(a) || !self.contains(b) || !a.is_adjacent(b) {
            return None;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if lo.row == hi.row {
            Some((true, lo.row * (self.grid_n - 1) + lo.col))
        } else {
            Some((false, lo.row * self.grid_n + lo.col))
        }
    }

    pub fn has_edge(&self, a: Coord, b: Coord) -> bool {
        match self.slot(a, b) {
            Some((true, i)) => self.horizontal[i],
            Some((false, i)) => self.vertical[i],
            None => false,
        }
    }

    pub fn set_edge(&mut self, a: Coord, b: Coord, present: bool) -> Result<()> {
        match self.slot(a, b) {
            Some((true, i)) => self.horizontal[i] = present,
            Some((false, i)) => self.vertical[i] = present,
            None => return Err(MazeError::NotAdjacent(a, b)),
        }
        Ok(())
    }

    /// Every lattice-adjacent pair, present or not, in canonical order
    /// (horizontal pairs row-major, then vertical pairs row-major).
    pub fn lattice_pairs(&self) -> impl Iterator<Item = (Coord, Coord)> + '_ {
        let n = self.grid_n;
        let horizontal = (0..n).flat_map(move |r| (0..n - 1).map(move |c| (Coord::new(r, c), Coord::new(r, c + 1))));
        let vertical = (0..n - 1).flat_map(move |r| (0..n).map(move |c| (Coord::new(r, c), Coord::new(r + 1, c))));
        horizontal.chain(vertical)
    }

    /// Present edges in canonical order, each as `(lower, higher)` coordinate.
    pub fn edges(&self) -> impl Iterator<Item = (Coord, Coord)> + '_ {
        self.lattice_pairs().filter(|&(a, b)| self.has_edge(a, b))
    }

    pub fn edge_count(&self) -> usize {
        self.horizontal.iter().chain(&self.vertical).filter(|&&e| e).count()
    }

    /// Connected neighbours of `c` in N, E, S, W order.
    pub fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| c.step(d, self.grid_n))
            .filter(move |&nb| self.has_edge(c, nb))
    }

    pub fn degree(&self, c: Coord) -> usize {
        self.neighbors(c).count()
    }

    /// Number of connected components (isolated nodes count).
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.node_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.node_count();
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, self.index(a)), find(&mut parent, self.index(b)));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// True iff the maze contains a cycle: `|E| > |V| - components`.
    pub fn has_cycle(&self) -> bool {
        self.edge_count() + self.component_count() > self.node_count()
    }
}

impl fmt::Debug for LatticeMaze {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeMaze")
            .field("grid_n", &self.grid_n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
