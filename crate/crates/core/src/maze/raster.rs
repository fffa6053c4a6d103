use std::io::Write;

use super::{Coord, Endpoints, LatticeMaze, MazeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const WALL: Rgb = Rgb([0, 0, 0]);
    pub const CORRIDOR: Rgb = Rgb([255, 255, 255]);
    pub const START: Rgb = Rgb([0, 255, 0]);
    pub const END: Rgb = Rgb([255, 0, 0]);
}

/// Square RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    side: usize,
    pixels: Vec<Rgb>,
}

impl RasterImage {
    pub fn filled(side: usize, color: Rgb) -> Self {
        Self { side, pixels: vec![color; side * side] }
    }

    pub fn from_pixels(side: usize, pixels: Vec<Rgb>) -> Result<Self> {
        if pixels.len() != side * side {
            return Err(MazeError::Raster(format!("{} pixels for side {side}", pixels.len())));
        }
        Ok(Self { side, pixels })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> Rgb {
        self.pixels[row * self.side + col]
    }

    pub fn set(&mut self, row: usize, col: usize, color: Rgb) {
        self.pixels[row * self.side + col] = color;
    }

    /// Nearest-neighbour enlargement by an integer factor. Display only.
    pub fn upscale(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let side = self.side * factor;
        let mut out = Self::filled(side, Rgb::WALL);
        for r in 0..side {
            for c in 0..side {
                out.set(r, c, self.get(r / factor, c / factor));
            }
        }
        out
    }
}

/// Black/white raster; `true` is white.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryGrid {
    side: usize,
    pixels: Vec<bool>,
}

impl BinaryGrid {
    pub fn black(side: usize) -> Self {
        Self { side, pixels: vec![false; side * side] }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.side + col]
    }

    pub fn set(&mut self, row: usize, col: usize, white: bool) {
        self.pixels[row * self.side + col] = white;
    }

    pub fn white_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn to_image(&self) -> RasterImage {
        let pixels = self.pixels.iter().map(|&w| if w { Rgb::CORRIDOR } else { Rgb::WALL }).collect();
        RasterImage { side: self.side, pixels }
    }

    /// Accepts only pure black and pure white pixels.
    pub fn from_image(image: &RasterImage) -> Result<Self> {
        let pixels = image
            .pixels
            .iter()
            .enumerate()
            .map(|(i, &p)| match p {
                Rgb::CORRIDOR => Ok(true),
                Rgb::WALL => Ok(false),
                other => Err(MazeError::Raster(format!(
                    "pixel ({}, {}) = {:?} is neither black nor white",
                    i / image.side,
                    i % image.side,
                    other.0
                ))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { side: image.side, pixels })
    }
}

/// Encodes a maze and its endpoints as a `(2 * grid_n - 1)`-sided RGB raster.
pub fn rasterize(maze: &LatticeMaze, endpoints: &Endpoints) -> Result<RasterImage> {
    endpoints.validate(maze.grid_n())?;
    let mut img = RasterImage::filled(super::raster_side(maze.grid_n()), Rgb::WALL);
    for node in maze.nodes() {
        img.set(2 * node.row, 2 * node.col, Rgb::CORRIDOR);
    }
    for (a, b) in maze.edges() {
        img.set(a.row + b.row, a.col + b.col, Rgb::CORRIDOR);
    }
    img.set(2 * endpoints.start.row, 2 * endpoints.start.col, Rgb::START);
    img.set(2 * endpoints.end.row, 2 * endpoints.end.col, Rgb::END);
    Ok(img)
}

/// Inverse of [`rasterize`].
pub fn derasterize(image: &RasterImage) -> Result<(LatticeMaze, Endpoints)> {
    let grid_n = super::grid_n_for_side(image.side())
        .ok_or_else(|| MazeError::Raster(format!("side {} is not odd", image.side())))?;
    let mut maze = LatticeMaze::empty(grid_n)?;
    let (mut start, mut end) = (None, None);
    for r in 0..image.side() {
        for c in 0..image.side() {
            let px = image.get(r, c);
            let bad = |what: &str| MazeError::Raster(format!("pixel ({r}, {c}) = {:?}: {what}", px.0));
            match (r % 2, c % 2) {
                (0, 0) => {
                    let node = Coord::new(r / 2, c / 2);
                    match px {
                        Rgb::CORRIDOR => {}
                        Rgb::START if start.is_none() => start = Some(node),
                        Rgb::END if end.is_none() => end = Some(node),
                        Rgb::START | Rgb::END => return Err(bad("duplicate endpoint")),
                        _ => return Err(bad("node pixel must be corridor or endpoint")),
                    }
                }
                (1, 1) => {
                    if px != Rgb::WALL {
                        return Err(bad("lattice gap must be wall"));
                    }
                }
                _ => match px {
                    Rgb::WALL => {}
                    Rgb::CORRIDOR => {
                        let (a, b) = if r % 2 == 1 {
                            (Coord::new(r / 2, c / 2), Coord::new(r / 2 + 1, c / 2))
                        } else {
                            (Coord::new(r / 2, c / 2), Coord::new(r / 2, c / 2 + 1))
                        };
                        maze.set_edge(a, b, true)?;
                    }
                    _ => return Err(bad("edge pixel must be wall or corridor")),
                },
            }
        }
    }
    let start = start.ok_or_else(|| MazeError::Raster("no start pixel".into()))?;
    let end = end.ok_or_else(|| MazeError::Raster("no end pixel".into()))?;
    Ok((maze, Endpoints { start, end }))
}

/// Solution raster: path nodes and the edge pixels between consecutive path
/// nodes are white, everything else black.
pub fn rasterize_solution(maze: &LatticeMaze, path: &[Coord]) -> Result<BinaryGrid> {
    if path.is_empty() {
        return Err(MazeError::InvalidPath("empty path".into()));
    }
    let mut seen = vec![false; maze.node_count()];
    for &node in path {
        if !maze.contains(node) {
            return Err(MazeError::InvalidPath(format!("{node:?} outside the lattice")));
        }
        let i = maze.index(node);
        if std::mem::replace(&mut seen[i], true) {
            return Err(MazeError::InvalidPath(format!("{node:?} visited twice")));
        }
    }
    let mut grid = BinaryGrid::black(super::raster_side(maze.grid_n()));
    for pair in path.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !maze.has_edge(a, b) {
            return Err(MazeError::InvalidPath(format!("{a:?} -> {b:?} is not a maze edge")));
        }
        grid.set(a.row + b.row, a.col + b.col, true);
    }
    for &node in path {
        grid.set(2 * node.row, 2 * node.col, true);
    }
    Ok(grid)
}

/// Binary PPM (P6): `"P6\n<n> <n>\n255\n"` followed by row-major RGB bytes.
pub fn write_ppm<W: Write>(mut out: W, image: &RasterImage) -> std::io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", image.side, image.side)?;
    let bytes: Vec<u8> = image.pixels.iter().flat_map(|p| p.0).collect();
    out.write_all(&bytes)
}

/// Parses a square binary PPM with maxval 255.
pub fn read_ppm(bytes: &[u8]) -> Result<RasterImage> {
    let mut pos = 0usize;
    let token = |pos: &mut usize| -> Result<String> {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        let begin = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if begin == *pos {
            return Err(MazeError::Ppm { offset: begin, reason: "unexpected end of header".into() });
        }
        Ok(String::from_utf8_lossy(&bytes[begin..*pos]).into_owned())
    };
    let magic_at = pos;
    if token(&mut pos)? != "P6" {
        return Err(MazeError::Ppm { offset: magic_at, reason: "missing P6 magic".into() });
    }
    let number = |pos: &mut usize| -> Result<usize> {
        let at = *pos;
        token(pos)?
            .parse()
            .map_err(|_| MazeError::Ppm { offset: at, reason: "expected an unsigned integer".into() })
    };
    let (width, height, maxval) = (number(&mut pos)?, number(&mut pos)?, number(&mut pos)?);
    if width != height {
        return Err(MazeError::Ppm { offset: pos, reason: format!("non-square image {width}x{height}") });
    }
    if maxval != 255 {
        return Err(MazeError::Ppm { offset: pos, reason: format!("unsupported maxval {maxval}") });
    }
    // Exactly one whitespace byte separates the header from the payload.
    pos += 1;
    let expected = width * height * 3;
    let payload = bytes.get(pos..).unwrap_or(&[]);
    if payload.len() != expected {
        return Err(MazeError::Ppm {
            offset: pos + payload.len().min(expected),
            reason: format!("payload has {} bytes, expected {expected}", payload.len()),
        });
    }
    let pixels = payload.chunks_exact(3).map(|c| Rgb([c[0], c[1], c[2]])).collect();
    Ok(RasterImage { side: width, pixels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor(k: usize) -> LatticeMaze {
        // 1 x k corridors are not square; use the top row of a k x k lattice
        // joined by the leftmost column so every node is on the path.
        let mut m = LatticeMaze::empty(k).unwrap();
        for c in 0..k - 1 {
            m.set_edge(Coord::new(0, c), Coord::new(0, c + 1), true).unwrap();
        }
        m
    }

    #[test]
    fn two_by_two_path_raster() {
        // (0,0)-(0,1)-(1,1)-(1,0): a U-shaped path.
        let m = LatticeMaze::from_edges(
            2,
            [
                (Coord::new(0, 0), Coord::new(0, 1)),
                (Coord::new(0, 1), Coord::new(1, 1)),
                (Coord::new(1, 1), Coord::new(1, 0)),
            ],
        )
        .unwrap();
        let e = Endpoints { start: Coord::new(0, 0), end: Coord::new(1, 0) };
        let img = rasterize(&m, &e).unwrap();
        assert_eq!(img.side(), 3);
        assert_eq!(img.get(0, 0), Rgb::START);
        assert_eq!(img.get(2, 0), Rgb::END);
        assert_eq!(img.get(1, 0), Rgb::WALL);
        assert_eq!(img.get(1, 1), Rgb::WALL);
        let open = img.pixels().iter().filter(|&&p| p != Rgb::WALL).count();
        assert_eq!(open, 7);
        assert_eq!(derasterize(&img).unwrap(), (m, e));
    }

    #[test]
    fn solution_pixel_count() {
        let m = corridor(4);
        let path: Vec<_> = (0..4).map(|c| Coord::new(0, c)).collect();
        let sol = rasterize_solution(&m, &path).unwrap();
        assert_eq!(sol.white_count(), 2 * path.len() - 1);
        assert!((0..7).all(|c| sol.get(0, c)));
        let one_edge = rasterize_solution(&m, &path[..2]).unwrap();
        assert_eq!(one_edge.white_count(), 3);
    }

    #[test]
    fn solution_rejects_invalid_paths() {
        let m = corridor(3);
        let jump = [Coord::new(0, 0), Coord::new(1, 0)];
        assert!(matches!(rasterize_solution(&m, &jump), Err(MazeError::InvalidPath(_))));
        let repeat = [Coord::new(0, 0), Coord::new(0, 1), Coord::new(0, 0)];
        assert!(matches!(rasterize_solution(&m, &repeat), Err(MazeError::InvalidPath(_))));
        assert!(rasterize_solution(&m, &[]).is_err());
    }

    #[test]
    fn ppm_header_is_bit_exact() {
        let img = RasterImage::filled(3, Rgb::END);
        let mut buf = Vec::new();
        write_ppm(&mut buf, &img).unwrap();
        assert_eq!(&buf[..11], b"P6\n3 3\n255\n");
        assert_eq!(buf.len(), 11 + 27);
        assert_eq!(read_ppm(&buf).unwrap(), img);
    }

    #[test]
    fn ppm_truncation_reports_offset() {
        let mut buf = Vec::new();
        write_ppm(&mut buf, &RasterImage::filled(3, Rgb::WALL)).unwrap();
        buf.truncate(20);
        match read_ppm(&buf) {
            Err(MazeError::Ppm { offset, .. }) => assert_eq!(offset, 20),
            other => panic!("expected PPM error, got {other:?}"),
        }
        assert!(read_ppm(b"P5\n3 3\n255\n").is_err());
    }

    #[test]
    fn derasterize_rejects_garbage() {
        let mut img = RasterImage::filled(3, Rgb::WALL);
        assert!(derasterize(&img).is_err());
        img.set(0, 0, Rgb::START);
        img.set(0, 2, Rgb::END);
        img.set(2, 0, Rgb::CORRIDOR);
        img.set(2, 2, Rgb::CORRIDOR);
        assert!(derasterize(&img).is_ok());
        img.set(1, 1, Rgb::CORRIDOR);
        assert!(derasterize(&img).is_err());
    }

    #[test]
    fn binary_grid_image_round_trip() {
        let mut g = BinaryGrid::black(3);
        g.set(1, 2, true);
        assert_eq!(BinaryGrid::from_image(&g.to_image()).unwrap(), g);
        assert!(BinaryGrid::from_image(&RasterImage::filled(1, Rgb::START)).is_err());
    }

    #[test]
    fn upscale_repeats_pixels() {
        let mut img = RasterImage::filled(1, Rgb::START);
        img = img.upscale(3);
        assert_eq!(img.side(), 3);
        assert!(img.pixels().iter().all(|&p| p == Rgb::START));
    }
}
