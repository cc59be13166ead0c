//! Planar geometry: points, distances and the rectangular city grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in city length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// How the separation between a citizen cell and an amenity is measured.
///
/// `Euclidean` is the straight-line distance. `Squared` drops the square
/// root, which turns the rational kernel into a Cauchy-like profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    #[default]
    Euclidean,
    Squared,
}

impl DistanceMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceMode::Euclidean => "euclidean",
            DistanceMode::Squared => "squared",
        }
    }
}

pub fn distance(p: Point, q: Point, mode: DistanceMode) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let sq = dx * dx + dy * dy;
    match mode {
        DistanceMode::Euclidean => sq.sqrt(),
        DistanceMode::Squared => sq,
    }
}

/// Rectangular discretisation of the city into `ny` rows and `nx` columns.
///
/// Row 0 is the `y_min` row. Each cell is represented by its geometric
/// centre. Cells are half-open `[left, right) x [bottom, top)` except the
/// last row and column, which are closed, so every in-bounds point maps to
/// exactly one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        for (name, v) in [("x_min", x_min), ("x_max", x_max), ("y_min", y_min), ("y_max", y_max)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("grid.{name}"), "must be finite"));
            }
        }
        if x_min >= x_max {
            return Err(Error::invalid("grid.x_max", "must be greater than grid.x_min"));
        }
        if y_min >= y_max {
            return Err(Error::invalid("grid.y_max", "must be greater than grid.y_min"));
        }
        if nx == 0 {
            return Err(Error::invalid("grid.nx", "must be at least 1"));
        }
        if ny == 0 {
            return Err(Error::invalid("grid.ny", "must be at least 1"));
        }
        Ok(Grid {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Number of cells, `m`.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_width() * self.cell_height()
    }

    pub fn diagonal(&self) -> f64 {
        (self.x_max - self.x_min).hypot(self.y_max - self.y_min)
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Point {
        Point {
            x: self.x_min + (col as f64 + 0.5) * (self.x_max - self.x_min) / self.nx as f64,
            y: self.y_min + (row as f64 + 0.5) * (self.y_max - self.y_min) / self.ny as f64,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// The `(row, col)` of the cell containing `p`, or `None` outside the grid.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        if !p.is_finite() || !self.contains(p) {
            return None;
        }
        let col = axis_index(p.x, self.x_min, self.x_max, self.nx);
        let row = axis_index(p.y, self.y_min, self.y_max, self.ny);
        Some((row, col))
    }

    /// Maps fractional lattice coordinates (column, row) of the cell-centre
    /// lattice back to city units.
    pub fn lattice_to_city(&self, col: f64, row: f64) -> Point {
        Point {
            x: self.x_min + (col + 0.5) * (self.x_max - self.x_min) / self.nx as f64,
            y: self.y_min + (row + 0.5) * (self.y_max - self.y_min) / self.ny as f64,
        }
    }

    /// Returns the same grid shifted by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Result<Self> {
        Grid::new(
            self.x_min + dx,
            self.x_max + dx,
            self.y_min + dy,
            self.y_max + dy,
            self.nx,
            self.ny,
        )
    }
}

fn axis_index(v: f64, lo: f64, hi: f64, n: usize) -> usize {
    let idx = ((v - lo) / (hi - lo) * n as f64).floor();
    if idx < 0.0 {
        0
    } else {
        (idx as usize).min(n - 1)
    }
}

/// A dense `ny x nx` array of cell values, row-major with row 0 at `y_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl Raster {
    pub fn zeros(ny: usize, nx: usize) -> Self {
        Raster {
            nx,
            ny,
            data: vec![0.0; nx * ny],
        }
    }

    pub fn filled(ny: usize, nx: usize, value: f64) -> Self {
        Raster {
            nx,
            ny,
            data: vec![value; nx * ny],
        }
    }

    /// Builds a raster from row-major data. Fails if the length does not
    /// match the shape.
    pub fn from_vec(ny: usize, nx: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nx * ny {
            return Err(Error::Format(format!(
                "expected {} values for a {ny}x{nx} raster, found {}",
                nx * ny,
                data.len()
            )));
        }
        Ok(Raster { nx, ny, data })
    }

    /// Builds a raster from rows, `rows[0]` being the `y_min` row.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let ny = rows.len();
        let nx = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nx * ny);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != nx {
                return Err(Error::Format(format!(
                    "row {i} has {} values, expected {nx}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Raster { nx, ny, data })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.data.len()
    }
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.nx + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.nx + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.nx..(row + 1) * self.nx]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn has_shape(&self, ny: usize, nx: usize) -> bool {
        self.ny == ny && self.nx == nx
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Raster {
        Raster {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Raster, f: impl Fn(f64, f64) -> f64) -> Raster {
        debug_assert!(other.has_shape(self.ny, self.nx));
        Raster {
            nx: self.nx,
            ny: self.ny,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let o = Point::new(0.0, 0.0);
        let p = Point::new(3.0, 4.0);
        assert_eq!(distance(o, p, DistanceMode::Euclidean), 5.0);
        assert_eq!(distance(o, p, DistanceMode::Squared), 25.0);
        let q = Point::new(1.0, 1.0);
        assert_eq!(distance(q, q, DistanceMode::Euclidean), 0.0);
        assert_eq!(distance(q, q, DistanceMode::Squared), 0.0);
    }

    #[test]
    fn grid_rejects_bad_bounds() {
        assert!(Grid::new(1.0, 1.0, 0.0, 1.0, 1, 1).is_err());
        assert!(Grid::new(0.0, 1.0, 2.0, 1.0, 1, 1).is_err());
        let err = Grid::new(0.0, 1.0, 0.0, 1.0, 0, 1).unwrap_err();
        assert!(err.to_string().starts_with("grid.nx"));
        assert!(Grid::new(f64::NAN, 1.0, 0.0, 1.0, 1, 1).is_err());
    }

    #[test]
    fn cell_centers_are_geometric_centres() {
        let g = Grid::new(0.0, 4.0, 10.0, 12.0, 4, 2).unwrap();
        assert_eq!(g.cell_center(0, 0), Point::new(0.5, 10.5));
        assert_eq!(g.cell_center(1, 3), Point::new(3.5, 11.5));
        assert_eq!(g.cell_area(), 1.0);
    }

    #[test]
    fn boundary_points_map_to_exactly_one_cell() {
        let g = Grid::new(0.0, 4.0, 0.0, 4.0, 4, 4).unwrap();
        assert_eq!(g.cell_of(Point::new(1.0, 1.0)), Some((1, 1)));
        assert_eq!(g.cell_of(Point::new(0.0, 0.0)), Some((0, 0)));
        // last row/column are closed
        assert_eq!(g.cell_of(Point::new(4.0, 4.0)), Some((3, 3)));
        assert_eq!(g.cell_of(Point::new(4.0001, 1.0)), None);
        assert_eq!(g.cell_of(Point::new(-0.0001, 1.0)), None);
    }

    #[test]
    fn raster_rows_are_checked() {
        assert!(Raster::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        let r = Raster::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(r.get(1, 0), 3.0);
        assert_eq!(r.row(0), &[1.0, 2.0]);
    }
}
