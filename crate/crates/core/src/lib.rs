//! Isobenefit engine: amenity benefit fields over a city grid.
//!
//! Amenities with a punctual benefit `A` spread benefit over the city
//! through a distance-decay kernel parameterised by the efficiency of
//! moving `E`. Superposing every amenity gives the benefit field, whose
//! contours are the isobenefit lines and whose surface is the isobenefit
//! orography. The crate also computes total benefit (cell sum and
//! continuous integral), the uniformity coefficient and scenario diffs.
//!
//! ```
//! use isobenefit_core::{compute_field, field_stats, Amenity, Grid, MobilityConfig, Scenario};
//!
//! let grid = Grid::new(0.0, 10.0, 0.0, 10.0, 10, 10).unwrap();
//! let scenario = Scenario::new("demo", grid, MobilityConfig::rational(1.0))
//!     .with_amenities([Amenity::new("park", 5.0, 5.0, 10.0)]);
//! let field = compute_field(&scenario).unwrap();
//! let stats = field_stats(&field).unwrap();
//! assert!(stats.max <= 10.0 && stats.min > 0.0);
//! ```

pub mod analysis;
pub mod contour;
pub mod error;
pub mod field;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod scenario;

pub use analysis::{
    argmax, diff_scenarios, field_histogram, field_stats, preference_sweep, sorted_profile,
    uniformity_coefficient, CompareReport, FieldStats, Histogram, ScenarioDiff, SweepPoint,
};
pub use contour::{auto_levels, extract_isolines, orography_export, IsolineSet, Orography, Polyline};
pub use error::{Error, Result};
pub use field::{
    benefit_at, compute_field, kernel_exponential, kernel_rational, scenario_field,
    total_benefit_discrete, total_benefit_integral, weighted_field, BenefitField,
};
pub use geometry::{distance, DistanceMode, Grid, Point, Raster};
pub use scenario::{Amenity, EfficiencyModel, Kernel, MobilityConfig, Scenario, Warning};
