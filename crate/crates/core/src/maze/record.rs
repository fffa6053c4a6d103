use serde::{Deserialize, Serialize};

use super::{Coord, Endpoints, LatticeMaze, MazeConfig, MazeInstance, Result};

/// On-disk JSON form of a generated maze.
///
/// ```json
/// {"grid_n": 5, "p": 0.0, "deadend_start": true, "seed": 7,
///  "edges": [[0, 0, 0, 1], ...], "start": [4, 4], "end": [0, 0]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MazeRecord {
    pub grid_n: usize,
    pub p: f64,
    pub deadend_start: bool,
    pub seed: u64,
    pub edges: Vec<[usize; 4]>,
    pub start: [usize; 2],
    pub end: [usize; 2],
}

impl From<&MazeInstance> for MazeRecord {
    fn from(inst: &MazeInstance) -> Self {
        let MazeConfig { grid_n, p, deadend_start, seed } = inst.config;
        let Endpoints { start, end } = inst.endpoints;
        Self {
            grid_n,
            p,
            deadend_start,
            seed,
            edges: inst.maze.edges().map(|(a, b)| [a.row, a.col, b.row, b.col]).collect(),
            start: [start.row, start.col],
            end: [end.row, end.col],
        }
    }
}

impl MazeRecord {
    pub fn to_instance(&self) -> Result<MazeInstance> {
        let config = MazeConfig::new(self.grid_n, self.p, self.deadend_start, self.seed)?;
        let maze = LatticeMaze::from_edges(
            self.grid_n,
            self.edges.iter().map(|e| (Coord::new(e[0], e[1]), Coord::new(e[2], e[3]))),
        )?;
        let endpoints = Endpoints {
            start: Coord::new(self.start[0], self.start[1]),
            end: Coord::new(self.end[0], self.end[1]),
        };
        endpoints.validate(self.grid_n)?;
        Ok(MazeInstance { config, maze, endpoints })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::generate;

    #[test]
    fn json_round_trip() {
        let inst = generate(&MazeConfig::new(4, 0.3, false, 11).unwrap()).unwrap();
        let rec = MazeRecord::from(&inst);
        let text = rec.to_json().unwrap();
        assert!(text.starts_with("{\"grid_n\":4,\"p\":0.3,\"deadend_start\":false,\"seed\":11,\"edges\":[["));
        let back = MazeRecord::from_json(&text).unwrap().to_instance().unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn rejects_non_lattice_edges() {
        let rec = MazeRecord {
            grid_n: 2,
            p: 0.0,
            deadend_start: true,
            seed: 0,
            edges: vec![[0, 0, 1, 1]],
            start: [0, 0],
            end: [1, 1],
        };
        assert!(rec.to_instance().is_err());
    }
}
