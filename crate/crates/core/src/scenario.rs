//! Scenario description: amenities, mobility assumptions and optional
//! population density over a grid.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DistanceMode, Grid, Point, Raster};

/// Fraction of the grid diagonal above which a uniform rational-kernel `E`
/// triggers the "E too high" warning.
pub const EFFICIENCY_WARNING_FRACTION: f64 = 0.25;

/// A point attraction. A negative `punctual_benefit` marks a disamenity.
#[derive(Debug, Clone, PartialEq)]
pub struct Amenity {
    pub id: String,
    pub position: Point,
    pub punctual_benefit: f64,
    pub label: Option<String>,
}

impl Amenity {
    pub fn new(id: impl Into<String>, x: f64, y: f64, punctual_benefit: f64) -> Self {
        Amenity {
            id: id.into(),
            position: Point::new(x, y),
            punctual_benefit,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_disamenity(&self) -> bool {
        self.punctual_benefit < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `A·E / (d + E)`
    Rational,
    /// `A·exp(-E·d)`
    Exponential,
}

impl Kernel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kernel::Rational => "rational",
            Kernel::Exponential => "exponential",
        }
    }
}

/// Efficiency of moving, either constant over the city or sampled per cell.
#[derive(Debug, Clone, PartialEq)]
pub enum EfficiencyModel {
    Uniform(f64),
    /// Shape `(ny, nx)` matching the scenario grid; looked up at the citizen cell.
    PerCell(Raster),
}

impl EfficiencyModel {
    pub fn uniform(&self) -> Option<f64> {
        match self {
            EfficiencyModel::Uniform(e) => Some(*e),
            EfficiencyModel::PerCell(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobilityConfig {
    pub kernel: Kernel,
    pub efficiency: EfficiencyModel,
    pub distance_mode: DistanceMode,
}

impl MobilityConfig {
    pub fn rational(e: f64) -> Self {
        MobilityConfig {
            kernel: Kernel::Rational,
            efficiency: EfficiencyModel::Uniform(e),
            distance_mode: DistanceMode::Euclidean,
        }
    }

    pub fn exponential(e: f64) -> Self {
        MobilityConfig {
            kernel: Kernel::Exponential,
            efficiency: EfficiencyModel::Uniform(e),
            distance_mode: DistanceMode::Euclidean,
        }
    }

    pub fn with_distance_mode(mut self, mode: DistanceMode) -> Self {
        self.distance_mode = mode;
        self
    }

    /// The distance mode actually used: the exponential kernel always
    /// measures straight-line distance.
    pub fn effective_distance_mode(&self) -> DistanceMode {
        match self.kernel {
            Kernel::Rational => self.distance_mode,
            Kernel::Exponential => DistanceMode::Euclidean,
        }
    }

    /// Short text identifying kernel, effective distance mode and `E`.
    /// Two fields are only comparable when their fingerprints match.
    pub fn fingerprint(&self) -> String {
        let e = match &self.efficiency {
            EfficiencyModel::Uniform(e) => format!("uniform:{e:?}"),
            EfficiencyModel::PerCell(r) => {
                let vals = r.as_slice();
                let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                format!(
                    "per_cell:{}x{}:min={min:?}:max={max:?}:fnv={:016x}",
                    r.ny(),
                    r.nx(),
                    fnv1a(vals)
                )
            }
        };
        format!(
            "kernel={};distance={};E={e}",
            self.kernel.as_str(),
            self.effective_distance_mode().as_str()
        )
    }
}

fn fnv1a(values: &[f64]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

/// A non-fatal validation finding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub grid: Grid,
    pub amenities: Vec<Amenity>,
    pub mobility: MobilityConfig,
    /// Population per cell, shape `(ny, nx)`.
    pub density: Option<Raster>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, grid: Grid, mobility: MobilityConfig) -> Self {
        Scenario {
            name: name.into(),
            grid,
            amenities: Vec::new(),
            mobility,
            density: None,
        }
    }

    pub fn with_amenities(mut self, amenities: impl IntoIterator<Item = Amenity>) -> Self {
        self.amenities.extend(amenities);
        self
    }

    pub fn with_density(mut self, density: Raster) -> Self {
        self.density = Some(density);
        self
    }

    pub fn has_disamenities(&self) -> bool {
        self.amenities.iter().any(Amenity::is_disamenity)
    }

    /// Copy of the scenario keeping only amenities with non-negative `A`.
    pub fn amenities_only(&self) -> Scenario {
        Scenario {
            amenities: self
                .amenities
                .iter()
                .filter(|a| !a.is_disamenity())
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    /// Checks every invariant and returns the non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<Warning>> {
        let mut ids = HashSet::with_capacity(self.amenities.len());
        for (i, a) in self.amenities.iter().enumerate() {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::invalid(
                    format!("amenities[{i}].id"),
                    format!("duplicate amenity id {:?}", a.id),
                ));
            }
            if !a.position.x.is_finite() {
                return Err(Error::invalid(format!("amenities[{i}].x"), "must be finite"));
            }
            if !a.position.y.is_finite() {
                return Err(Error::invalid(format!("amenities[{i}].y"), "must be finite"));
            }
            if !a.punctual_benefit.is_finite() {
                return Err(Error::invalid(format!("amenities[{i}].A"), "must be finite"));
            }
        }

        let (ny, nx) = (self.grid.ny(), self.grid.nx());
        match &self.mobility.efficiency {
            EfficiencyModel::Uniform(e) => check_efficiency("mobility.E", *e)?,
            EfficiencyModel::PerCell(r) => {
                if !r.has_shape(ny, nx) {
                    return Err(Error::invalid(
                        "mobility.E_grid",
                        format!("expected {} values ({ny} rows x {nx} columns), found {}x{}", ny * nx, r.ny(), r.nx()),
                    ));
                }
                for (i, &e) in r.as_slice().iter().enumerate() {
                    check_efficiency(&format!("mobility.E_grid[{i}]"), e)?;
                }
            }
        }

        if let Some(d) = &self.density {
            if !d.has_shape(ny, nx) {
                return Err(Error::invalid(
                    "density",
                    format!("expected {} values ({ny} rows x {nx} columns), found {}x{}", ny * nx, d.ny(), d.nx()),
                ));
            }
            for (i, &v) in d.as_slice().iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::invalid(format!("density[{i}]"), "must be finite and non-negative"));
                }
            }
        }

        let mut warnings = Vec::new();
        if let (Kernel::Rational, DistanceMode::Euclidean, EfficiencyModel::Uniform(e)) = (
            self.mobility.kernel,
            self.mobility.effective_distance_mode(),
            &self.mobility.efficiency,
        ) {
            let limit = EFFICIENCY_WARNING_FRACTION * self.grid.diagonal();
            if *e > limit {
                warnings.push(Warning {
                    path: "mobility.E".into(),
                    message: format!(
                        "E = {e} exceeds {limit} (25% of the grid diagonal); high E flattens the kernel \
                         so that points between amenities score like points next to them"
                    ),
                });
            }
        }
        Ok(warnings)
    }
}

pub(crate) fn check_efficiency(path: &str, e: f64) -> Result<()> {
    if !e.is_finite() || e <= 0.0 {
        return Err(Error::invalid(path, format!("E must be finite and > 0, got {e}")));
    }
    Ok(())
}
