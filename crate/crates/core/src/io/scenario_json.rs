use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DistanceMode, Grid, Point, Raster};
use crate::scenario::{Amenity, EfficiencyModel, Kernel, MobilityConfig, Scenario};

pub const SCENARIO_VERSION: u32 = 1;

/// On-disk form of a [`Scenario`]. Arrays (`E_grid`, `density`) are flat,
/// row-major, row 0 being the `y_min` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub version: u32,
    pub name: String,
    pub grid: GridDocument,
    pub amenities: Vec<AmenityDocument>,
    pub mobility: MobilityDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDocument {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmenityDocument {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobilityDocument {
    pub kernel: Kernel,
    #[serde(default)]
    pub distance_mode: DistanceMode,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    #[serde(rename = "E_grid", default, skip_serializing_if = "Option::is_none")]
    pub e_grid: Option<Vec<f64>>,
}

impl From<&Amenity> for AmenityDocument {
    fn from(a: &Amenity) -> Self {
        AmenityDocument {
            id: a.id.clone(),
            x: a.position.x,
            y: a.position.y,
            a: a.punctual_benefit,
            label: a.label.clone(),
        }
    }
}

impl From<AmenityDocument> for Amenity {
    fn from(d: AmenityDocument) -> Self {
        Amenity {
            id: d.id,
            position: Point::new(d.x, d.y),
            punctual_benefit: d.a,
            label: d.label,
        }
    }
}

impl From<&MobilityConfig> for MobilityDocument {
    fn from(m: &MobilityConfig) -> Self {
        let (e, e_grid) = match &m.efficiency {
            EfficiencyModel::Uniform(e) => (Some(*e), None),
            EfficiencyModel::PerCell(r) => (None, Some(r.as_slice().to_vec())),
        };
        MobilityDocument {
            kernel: m.kernel,
            distance_mode: m.distance_mode,
            e,
            e_grid,
        }
    }
}

impl MobilityDocument {
    /// Converts to a config for a grid of `ny x nx` cells. Exactly one of
    /// `E` and `E_grid` must be present.
    pub fn to_config(&self, ny: usize, nx: usize) -> Result<MobilityConfig> {
        let efficiency = match (&self.e, &self.e_grid) {
            (Some(e), None) => EfficiencyModel::Uniform(*e),
            (None, Some(values)) => {
                if values.len() != nx * ny {
                    return Err(Error::invalid(
                        "mobility.E_grid",
                        format!("expected {} values ({ny} rows x {nx} columns), found {}", nx * ny, values.len()),
                    ));
                }
                EfficiencyModel::PerCell(Raster::from_vec(ny, nx, values.clone())?)
            }
            (Some(_), Some(_)) => {
                return Err(Error::invalid("mobility", "give either E or E_grid, not both"))
            }
            (None, None) => return Err(Error::invalid("mobility", "one of E or E_grid is required")),
        };
        Ok(MobilityConfig {
            kernel: self.kernel,
            efficiency,
            distance_mode: self.distance_mode,
        })
    }
}

impl ScenarioDocument {
    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioDocument {
            version: SCENARIO_VERSION,
            name: s.name.clone(),
            grid: GridDocument {
                x_min: s.grid.x_min(),
                x_max: s.grid.x_max(),
                y_min: s.grid.y_min(),
                y_max: s.grid.y_max(),
                nx: s.grid.nx(),
                ny: s.grid.ny(),
            },
            amenities: s.amenities.iter().map(AmenityDocument::from).collect(),
            mobility: MobilityDocument::from(&s.mobility),
            density: s.density.as_ref().map(|d| d.as_slice().to_vec()),
        }
    }

    /// Builds and fully validates the scenario.
    pub fn into_scenario(self) -> Result<Scenario> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::invalid(
                "version",
                format!("unsupported version {}, expected {SCENARIO_VERSION}", self.version),
            ));
        }
        let g = &self.grid;
        let grid = Grid::new(g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny)?;
        let (ny, nx) = (grid.ny(), grid.nx());
        let mobility = self.mobility.to_config(ny, nx)?;
        let density = match self.density {
            None => None,
            Some(values) => {
                if values.len() != nx * ny {
                    return Err(Error::invalid(
                        "density",
                        format!("expected {} values ({ny} rows x {nx} columns), found {}", nx * ny, values.len()),
                    ));
                }
                Some(Raster::from_vec(ny, nx, values)?)
            }
        };
        let scenario = Scenario {
            name: self.name,
            grid,
            amenities: self.amenities.into_iter().map(Amenity::from).collect(),
            mobility,
            density,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Parses and validates a scenario document. Schema errors name the
/// offending path, e.g. `grid.nx`.
pub fn read_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "document".to_owned() } else { path };
        Error::Invalid {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    doc.into_scenario()
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn write_scenario(scenario: &Scenario) -> Result<String> {
    scenario.validate()?;
    let mut text = serde_json::to_string_pretty(&ScenarioDocument::from_scenario(scenario))
        .map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    Ok(text)
}
