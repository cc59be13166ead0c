//! Benefit kernels and the gridded benefit field.
//!
//! Each amenity spreads its punctual benefit `A` over the city through a
//! distance-decay kernel. The benefit of a cell is the sum of every
//! amenity's contribution evaluated at the cell centre.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance, DistanceMode, Grid, Point, Raster};
use crate::quadrature::simpson_2d;
use crate::scenario::{check_efficiency, EfficiencyModel, Kernel, MobilityConfig, Scenario};

fn check_distance(d: f64) -> Result<()> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::invalid("d", format!("distance must be finite and >= 0, got {d}")));
    }
    Ok(())
}

/// `A·E / (d + E)`. Returns exactly `A` at `d = 0`.
pub fn kernel_rational(a: f64, e: f64, d: f64) -> Result<f64> {
    check_efficiency("E", e)?;
    check_distance(d)?;
    Ok(rational(a, e, d))
}

/// `A·exp(-E·d)`. Here a larger `E` means faster decay.
pub fn kernel_exponential(a: f64, e: f64, d: f64) -> Result<f64> {
    check_efficiency("E", e)?;
    check_distance(d)?;
    Ok(exponential(a, e, d))
}

#[inline]
fn rational(a: f64, e: f64, d: f64) -> f64 {
    if d == 0.0 {
        return a;
    }
    a * e / (d + e)
}

#[inline]
fn exponential(a: f64, e: f64, d: f64) -> f64 {
    a * (-e * d).exp()
}

#[inline]
fn contribution(kernel: Kernel, a: f64, e: f64, d: f64) -> f64 {
    match kernel {
        Kernel::Rational => rational(a, e, d),
        Kernel::Exponential => exponential(a, e, d),
    }
}

/// Sum of all amenity contributions at `k` for a fixed `E`.
fn superpose(scenario: &Scenario, k: Point, e: f64) -> f64 {
    let kernel = scenario.mobility.kernel;
    let mode = scenario.mobility.effective_distance_mode();
    scenario
        .amenities
        .iter()
        .fold(0.0, |acc, a| acc + contribution(kernel, a.punctual_benefit, e, distance(a.position, k, mode)))
}

/// Benefit received at an arbitrary point `k` from every amenity.
///
/// With per-cell efficiency, `E` is taken from the cell containing `k`, so
/// `k` must lie inside the grid.
pub fn benefit_at(scenario: &Scenario, k: Point) -> Result<f64> {
    scenario.validate()?;
    if !k.is_finite() {
        return Err(Error::invalid("k", "point must be finite"));
    }
    let e = match &scenario.mobility.efficiency {
        EfficiencyModel::Uniform(e) => *e,
        EfficiencyModel::PerCell(r) => {
            let (row, col) = scenario
                .grid
                .cell_of(k)
                .ok_or(Error::OutOfDomain { x: k.x, y: k.y })?;
            r.get(row, col)
        }
    };
    Ok(superpose(scenario, k, e))
}

/// The benefit matrix of a scenario plus the provenance needed to compare
/// it with other fields.
#[derive(Debug, Clone, PartialEq)]
pub struct BenefitField {
    grid: Grid,
    values: Raster,
    scenario_name: String,
    mobility_fingerprint: String,
    has_disamenities: bool,
}

impl BenefitField {
    /// Wraps precomputed values. The values must be finite and match the
    /// grid shape.
    pub fn from_raster(
        grid: Grid,
        values: Raster,
        scenario_name: impl Into<String>,
        mobility_fingerprint: impl Into<String>,
    ) -> Result<Self> {
        if !values.has_shape(grid.ny(), grid.nx()) {
            return Err(Error::ShapeMismatch {
                what: "field values".into(),
                expected_ny: grid.ny(),
                expected_nx: grid.nx(),
                found_ny: values.ny(),
                found_nx: values.nx(),
            });
        }
        if let Some(i) = values.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("values[{i}]"), "field values must be finite"));
        }
        Ok(BenefitField {
            grid,
            values,
            scenario_name: scenario_name.into(),
            mobility_fingerprint: mobility_fingerprint.into(),
            has_disamenities: false,
        })
    }

    /// Convenience for ad-hoc fields on a unit-cell grid anchored at the
    /// origin; `rows[0]` is the `y_min` row.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let values = Raster::from_rows(rows)?;
        let grid = Grid::new(0.0, values.nx() as f64, 0.0, values.ny() as f64, values.nx(), values.ny())?;
        BenefitField::from_raster(grid, values, "", "manual")
    }

    /// Marks the field as containing negative-A contributions.
    pub fn with_disamenities(mut self, flag: bool) -> Self {
        self.has_disamenities = flag;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &Raster {
        &self.values
    }
    pub fn scenario_name(&self) -> &str {
        &self.scenario_name
    }
    pub fn mobility_fingerprint(&self) -> &str {
        &self.mobility_fingerprint
    }
    pub fn has_disamenities(&self) -> bool {
        self.has_disamenities
    }
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values.get(row, col)
    }
}

/// Evaluates the benefit at every cell centre.
///
/// Rows are computed in parallel; each cell sums its amenities in list
/// order, so the result does not depend on how rows are partitioned.
pub fn compute_field(scenario: &Scenario) -> Result<BenefitField> {
    scenario.validate()?;
    let grid = scenario.grid;
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut data = vec![0.0; nx * ny];
    data.par_chunks_mut(nx).enumerate().for_each(|(row, out)| {
        for (col, cell) in out.iter_mut().enumerate() {
            let e = match &scenario.mobility.efficiency {
                EfficiencyModel::Uniform(e) => *e,
                EfficiencyModel::PerCell(r) => r.get(row, col),
            };
            *cell = superpose(scenario, grid.cell_center(row, col), e);
        }
    });
    let values = Raster::from_vec(ny, nx, data)?;
    Ok(BenefitField {
        grid,
        values,
        scenario_name: scenario.name.clone(),
        mobility_fingerprint: scenario.mobility.fingerprint(),
        has_disamenities: scenario.has_disamenities(),
    })
}

/// Multiplies each cell by its population density.
pub fn weighted_field(field: &BenefitField, density: &Raster) -> Result<BenefitField> {
    let grid = field.grid;
    if !density.has_shape(grid.ny(), grid.nx()) {
        return Err(Error::ShapeMismatch {
            what: "density".into(),
            expected_ny: grid.ny(),
            expected_nx: grid.nx(),
            found_ny: density.ny(),
            found_nx: density.nx(),
        });
    }
    if density.as_slice().iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::invalid("density", "values must be finite and non-negative"));
    }
    Ok(BenefitField {
        grid,
        values: field.values.zip_with(density, |b, d| b * d),
        scenario_name: field.scenario_name.clone(),
        mobility_fingerprint: format!("{};weighted", field.mobility_fingerprint),
        has_disamenities: field.has_disamenities,
    })
}

/// Field of a scenario, optionally density-weighted.
pub fn scenario_field(scenario: &Scenario, weighted: bool) -> Result<BenefitField> {
    let field = compute_field(scenario)?;
    if !weighted {
        return Ok(field);
    }
    let density = scenario
        .density
        .as_ref()
        .ok_or_else(|| Error::invalid("density", "weighted output requires a density field in the scenario"))?;
    weighted_field(&field, density)
}

/// Sum of every cell value: the discrete total benefit.
pub fn total_benefit_discrete(field: &BenefitField) -> f64 {
    field.values.as_slice().iter().sum()
}

/// Continuous total benefit: per amenity, the rational squared-distance
/// integrand `A·E / (u² + v² + E)` integrated over the city rectangle in
/// coordinates shifted to the amenity, with `resolution` composite-Simpson
/// panels per axis.
pub fn total_benefit_integral(scenario: &Scenario, resolution: usize) -> Result<f64> {
    scenario.validate()?;
    if resolution == 0 {
        return Err(Error::invalid("resolution", "must be at least 1"));
    }
    let MobilityConfig {
        kernel,
        efficiency,
        distance_mode,
    } = &scenario.mobility;
    if *kernel != Kernel::Rational {
        return Err(Error::Unsupported(
            "the continuous total is defined for the rational kernel only".into(),
        ));
    }
    if *distance_mode != DistanceMode::Squared {
        return Err(Error::Unsupported(
            "the continuous total is defined for the squared distance mode only".into(),
        ));
    }
    let e = efficiency.uniform().ok_or_else(|| {
        Error::Unsupported("the continuous total requires a uniform E".into())
    })?;

    let g = &scenario.grid;
    let total = scenario.amenities.iter().fold(0.0, |acc, a| {
        let (xi, yi) = (a.position.x, a.position.y);
        let ae = a.punctual_benefit * e;
        acc + simpson_2d(
            |u, v| ae / (u * u + v * v + e),
            g.x_min() - xi,
            g.x_max() - xi,
            g.y_min() - yi,
            g.y_max() - yi,
            resolution,
        )
    });
    Ok(total)
}
