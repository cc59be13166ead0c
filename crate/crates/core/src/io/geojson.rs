use serde::Serialize;

use crate::contour::IsolineSet;
use crate::geometry::{Grid, Point};

#[derive(Serialize)]
struct FeatureCollection<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    features: Vec<Feature<'a>>,
}

#[derive(Serialize)]
struct Feature<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    geometry: Geometry,
    properties: Properties<'a>,
}

#[derive(Serialize)]
#[serde(tag = "type")]
enum Geometry {
    LineString { coordinates: Vec<[f64; 2]> },
    Polygon { coordinates: Vec<Vec<[f64; 2]>> },
}

#[derive(Serialize)]
struct Properties<'a> {
    level: &'a f64,
}

fn signed_area(ring: &[[f64; 2]]) -> f64 {
    ring.iter()
        .zip(ring.iter().cycle().skip(1))
        .map(|(a, b)| a[0] * b[1] - b[0] * a[1])
        .sum::<f64>()
        / 2.0
}

fn to_city(grid: &Grid, p: &Point) -> [f64; 2] {
    let c = grid.lattice_to_city(p.x, p.y);
    [c.x, c.y]
}

/// FeatureCollection with one feature per polyline. Open lines become
/// `LineString`s; closed rings become single-ring `Polygon`s wound
/// counter-clockwise. Coordinates are in city units.
pub fn write_isolines_geojson(sets: &[IsolineSet], grid: &Grid) -> String {
    let mut features = Vec::new();
    for set in sets {
        for line in &set.polylines {
            let mut coords: Vec<[f64; 2]> = line.points.iter().map(|p| to_city(grid, p)).collect();
            let geometry = if line.closed {
                if signed_area(&coords) < 0.0 {
                    coords.reverse();
                }
                coords.push(coords[0]);
                Geometry::Polygon {
                    coordinates: vec![coords],
                }
            } else {
                Geometry::LineString { coordinates: coords }
            };
            features.push(Feature {
                kind: "Feature",
                geometry,
                properties: Properties { level: &set.level },
            });
        }
    }
    serde_json::to_string(&FeatureCollection {
        kind: "FeatureCollection",
        features,
    })
    .expect("isoline coordinates are finite")
}
