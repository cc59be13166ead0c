//! File formats: scenario JSON, CSV and ESRI ASCII grids, GeoJSON isolines
//! and PPM heatmaps.
//!
//! Orientation contract: internally row 0 is the `y_min` row. Every writer
//! that emits rows (CSV, ASCII grid, PPM) emits them top-down, i.e. starting
//! from the `y_max` row, and the matching readers flip them back. The flip
//! lives in [`top_down_rows`] and nowhere else.

mod geojson;
mod ppm;
mod raster_text;
mod scenario_json;

pub use self::geojson::write_isolines_geojson;
pub use self::ppm::{write_heatmap_ppm, Colormap};
pub use self::raster_text::{
    format_number, read_field_asciigrid, read_field_csv, write_field_asciigrid, write_field_csv,
};
pub use self::scenario_json::{
    read_scenario, write_scenario, AmenityDocument, GridDocument, MobilityDocument, ScenarioDocument,
    SCENARIO_VERSION,
};

use crate::geometry::Raster;

/// Rows in output order: `y_max` row first.
pub(crate) fn top_down_rows(values: &Raster) -> impl Iterator<Item = &[f64]> {
    (0..values.ny()).rev().map(move |r| values.row(r))
}

/// Inverse of [`top_down_rows`]: builds a raster from rows listed top-down.
pub(crate) fn from_top_down_rows(mut rows: Vec<Vec<f64>>) -> crate::Result<Raster> {
    rows.reverse();
    Raster::from_rows(&rows)
}
