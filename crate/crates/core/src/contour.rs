//! Isobenefit lines by marching squares, plus orography export.
//!
//! Contours are traced on the lattice whose nodes are the cell centres,
//! since that is where the benefit is defined. Output vertices are in
//! lattice coordinates: `x` is the fractional column, `y` the fractional
//! row. [`Grid::lattice_to_city`] maps them back to city units.
//!
//! Node values equal to the level are nudged up by `1e-12 * max(1, |level|)`
//! before classification so that no vertex coincides with a node. Saddle
//! cells are resolved by comparing the mean of the four corners with the
//! level. Segments are oriented with higher values on their left, which
//! makes each crossing edge the end of at most one segment and the start
//! of at most one other.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::BenefitField;
use crate::geometry::{Grid, Point, Raster};

const NUDGE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    /// Vertices in lattice coordinates. Closed rings do not repeat their
    /// first vertex.
    pub points: Vec<Point>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsolineSet {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// Crossing edge of the lattice: `H(r, c)` joins nodes `(r, c)` and
/// `(r, c + 1)`, `V(r, c)` joins `(r, c)` and `(r + 1, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

#[derive(Clone, Copy)]
enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

use Side::{Bottom as B, Left as L, Right as R, Top as T};

/// Directed segments per marching-squares case, higher values on the left.
/// Bits: bottom-left 1, bottom-right 2, top-right 4, top-left 8.
fn case_segments(case: u8, centre_above: bool) -> &'static [(Side, Side)] {
    match case {
        1 => &[(B, L)],
        2 => &[(R, B)],
        3 => &[(R, L)],
        4 => &[(T, R)],
        5 if centre_above => &[(B, R), (T, L)],
        5 => &[(B, L), (T, R)],
        6 => &[(T, B)],
        7 => &[(T, L)],
        8 => &[(L, T)],
        9 => &[(B, T)],
        10 if centre_above => &[(L, B), (R, T)],
        10 => &[(R, B), (L, T)],
        11 => &[(R, T)],
        12 => &[(L, R)],
        13 => &[(B, R)],
        14 => &[(L, B)],
        _ => &[],
    }
}

struct Tracer<'a> {
    values: &'a Raster,
    level: f64,
    eps: f64,
}

impl Tracer<'_> {
    fn value(&self, row: usize, col: usize) -> f64 {
        let v = self.values.get(row, col);
        if v == self.level {
            v + self.eps
        } else {
            v
        }
    }

    fn edge(&self, row: usize, col: usize, side: Side) -> Edge {
        match side {
            Side::Bottom => Edge::H(row, col),
            Side::Top => Edge::H(row + 1, col),
            Side::Left => Edge::V(row, col),
            Side::Right => Edge::V(row, col + 1),
        }
    }

    fn vertex(&self, edge: Edge) -> Point {
        let (r0, c0, r1, c1) = match edge {
            Edge::H(r, c) => (r, c, r, c + 1),
            Edge::V(r, c) => (r, c, r + 1, c),
        };
        let a = self.value(r0, c0);
        let b = self.value(r1, c1);
        let t = ((self.level - a) / (b - a)).clamp(0.0, 1.0);
        match edge {
            Edge::H(r, c) => Point::new(c as f64 + t, r as f64),
            Edge::V(r, c) => Point::new(c as f64, r as f64 + t),
        }
    }

    fn segments(&self) -> Vec<(Edge, Edge)> {
        let (ny, nx) = (self.values.ny(), self.values.nx());
        let mut out = Vec::new();
        for row in 0..ny - 1 {
            for col in 0..nx - 1 {
                let corners = [
                    self.value(row, col),
                    self.value(row, col + 1),
                    self.value(row + 1, col + 1),
                    self.value(row + 1, col),
                ];
                let case = corners
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &v)| if v >= self.level { acc | (1 << i) } else { acc });
                let centre_above = corners.iter().sum::<f64>() / 4.0 >= self.level;
                for &(from, to) in case_segments(case, centre_above) {
                    out.push((self.edge(row, col, from), self.edge(row, col, to)));
                }
            }
        }
        out
    }

    fn trace(&self) -> Vec<Polyline> {
        let segments = self.segments();
        let outgoing: HashMap<Edge, usize> = segments.iter().enumerate().map(|(i, s)| (s.0, i)).collect();
        let has_incoming: HashSet<Edge> = segments.iter().map(|s| s.1).collect();
        let mut visited = vec![false; segments.len()];
        let mut polylines = Vec::new();

        let follow = |start: usize, visited: &mut Vec<bool>| -> (Vec<Edge>, bool) {
            let first = segments[start].0;
            let mut chain = vec![first];
            let mut i = start;
            loop {
                visited[i] = true;
                let next = segments[i].1;
                if next == first {
                    return (chain, true);
                }
                chain.push(next);
                match outgoing.get(&next) {
                    Some(&j) if !visited[j] => i = j,
                    _ => return (chain, false),
                }
            }
        };

        // open chains start on edges nothing flows into
        for i in 0..segments.len() {
            if !visited[i] && !has_incoming.contains(&segments[i].0) {
                let (chain, closed) = follow(i, &mut visited);
                polylines.push(self.polyline(chain, closed));
            }
        }
        for i in 0..segments.len() {
            if !visited[i] {
                let (chain, closed) = follow(i, &mut visited);
                polylines.push(self.polyline(chain, closed));
            }
        }
        polylines
    }

    fn polyline(&self, chain: Vec<Edge>, closed: bool) -> Polyline {
        Polyline {
            points: chain.into_iter().map(|e| self.vertex(e)).collect(),
            closed,
        }
    }
}

/// Traces the isolines of `field` for each requested level, in input order.
pub fn extract_isolines(field: &BenefitField, levels: &[f64]) -> Result<Vec<IsolineSet>> {
    let values = field.values();
    if values.nx() < 2 || values.ny() < 2 {
        return Err(Error::invalid(
            "field",
            format!(
                "contouring needs at least a 2x2 field, got {}x{}",
                values.ny(),
                values.nx()
            ),
        ));
    }
    if let Some(i) = levels.iter().position(|l| !l.is_finite()) {
        return Err(Error::invalid(format!("levels[{i}]"), "must be finite"));
    }
    Ok(levels
        .par_iter()
        .map(|&level| {
            let tracer = Tracer {
                values,
                level,
                eps: NUDGE * level.abs().max(1.0),
            };
            IsolineSet {
                level,
                polylines: tracer.trace(),
            }
        })
        .collect())
}

/// `count` levels equally spaced strictly inside `(min, max)`.
pub fn auto_levels(field: &BenefitField, count: usize) -> Vec<f64> {
    let values = field.values().as_slice();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min >= max {
        return Vec::new();
    }
    let step = (max - min) / (count + 1) as f64;
    (1..=count)
        .map(|i| min + step * i as f64)
        .filter(|&l| l > min && l < max)
        .collect()
}

/// Height-map view of a field for 2.5D/3D rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Orography {
    pub grid: Grid,
    pub heights: Raster,
    /// Display hint only; heights are not scaled by it.
    pub vertical_exaggeration: f64,
}

pub fn orography_export(field: &BenefitField, exaggeration: f64) -> Result<Orography> {
    if !exaggeration.is_finite() || exaggeration <= 0.0 {
        return Err(Error::invalid("exaggeration", "must be finite and > 0"));
    }
    Ok(Orography {
        grid: *field.grid(),
        heights: field.values().clone(),
        vertical_exaggeration: exaggeration,
    })
}
