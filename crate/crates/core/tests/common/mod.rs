//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use isobenefit_core::{Amenity, DistanceMode, Grid, Kernel, MobilityConfig, Scenario};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Cell-by-amenity double loop, written straight from the kernel formulas.
pub fn naive_field(
    bounds: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
    amenities: &[(f64, f64, f64)],
    kernel: Kernel,
    mode: DistanceMode,
    e: f64,
) -> Vec<Vec<f64>> {
    let (x0, x1, y0, y1) = bounds;
    let mut out = vec![vec![0.0; nx]; ny];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            let xk = x0 + (x1 - x0) * (2 * c + 1) as f64 / (2 * nx) as f64;
            let yk = y0 + (y1 - y0) * (2 * r + 1) as f64 / (2 * ny) as f64;
            let mut b = 0.0;
            for &(xi, yi, a) in amenities {
                let sq = (xk - xi).powi(2) + (yk - yi).powi(2);
                b += match (kernel, mode) {
                    (Kernel::Rational, DistanceMode::Euclidean) => a * e / (sq.sqrt() + e),
                    (Kernel::Rational, DistanceMode::Squared) => (a * e) / (sq + e),
                    (Kernel::Exponential, _) => a * (-e * sq.sqrt()).exp(),
                };
            }
            *cell = b;
        }
    }
    out
}

pub fn random_scenario(rng: &mut ChaCha8Rng, max_cells: usize, max_amenities: usize) -> Scenario {
    let x0 = rng.gen_range(-50.0..50.0);
    let y0 = rng.gen_range(-50.0..50.0);
    let w = rng.gen_range(1.0..40.0);
    let h = rng.gen_range(1.0..40.0);
    let nx = rng.gen_range(1..=max_cells);
    let ny = rng.gen_range(1..=max_cells);
    let grid = Grid::new(x0, x0 + w, y0, y0 + h, nx, ny).unwrap();
    let kernel = if rng.gen_bool(0.5) { Kernel::Rational } else { Kernel::Exponential };
    let mode = if rng.gen_bool(0.5) { DistanceMode::Euclidean } else { DistanceMode::Squared };
    let e = match kernel {
        Kernel::Rational => rng.gen_range(0.05..10.0),
        Kernel::Exponential => rng.gen_range(0.01..2.0),
    };
    let mobility = MobilityConfig {
        kernel,
        efficiency: isobenefit_core::EfficiencyModel::Uniform(e),
        distance_mode: mode,
    };
    let n = rng.gen_range(0..=max_amenities);
    let amenities = (0..n).map(|i| {
        Amenity::new(
            format!("a{i}"),
            rng.gen_range(x0 - 5.0..x0 + w + 5.0),
            rng.gen_range(y0 - 5.0..y0 + h + 5.0),
            rng.gen_range(0.0..20.0),
        )
    });
    Scenario::new("random", grid, mobility).with_amenities(amenities.collect::<Vec<_>>())
}

pub fn oracle_for(s: &Scenario) -> Vec<Vec<f64>> {
    let g = &s.grid;
    let e = s.mobility.efficiency.uniform().expect("uniform E");
    let ams: Vec<_> = s
        .amenities
        .iter()
        .map(|a| (a.position.x, a.position.y, a.punctual_benefit))
        .collect();
    naive_field(
        (g.x_min(), g.x_max(), g.y_min(), g.y_max()),
        g.nx(),
        g.ny(),
        &ams,
        s.mobility.kernel,
        s.mobility.distance_mode,
        e,
    )
}

pub fn max_abs_diff(field: &isobenefit_core::BenefitField, oracle: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (r, row) in oracle.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            worst = worst.max((field.get(r, c) - v).abs());
        }
    }
    worst
}

/// Bilinear interpolation of row-major values at lattice coordinates.
pub fn bilinear(values: &isobenefit_core::Raster, x: f64, y: f64) -> f64 {
    let c0 = (x.floor() as usize).min(values.nx() - 2);
    let r0 = (y.floor() as usize).min(values.ny() - 2);
    let (fx, fy) = (x - c0 as f64, y - r0 as f64);
    let v00 = values.get(r0, c0);
    let v01 = values.get(r0, c0 + 1);
    let v10 = values.get(r0 + 1, c0);
    let v11 = values.get(r0 + 1, c0 + 1);
    v00 * (1.0 - fx) * (1.0 - fy) + v01 * fx * (1.0 - fy) + v10 * (1.0 - fx) * fy + v11 * fx * fy
}

/// Even-odd ray casting.
pub fn point_in_polygon(px: f64, py: f64, ring: &[isobenefit_core::Point]) -> bool {
    let mut inside = false;
    let n = ring.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > py) != (b.y > py) && px < (b.x - a.x) * (py - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}
