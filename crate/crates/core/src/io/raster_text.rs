use std::fmt::Write;

use super::{from_top_down_rows, top_down_rows};
use crate::error::{Error, Result};
use crate::field::BenefitField;
use crate::geometry::{Grid, Raster};

const NODATA: &str = "-9999";

/// Shortest text that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn parse_number(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Format(format!("line {line}: cannot parse {s:?} as a number")))
}

/// `ny` lines of `nx` comma-separated values, top row (`y_max`) first.
pub fn write_field_csv(field: &BenefitField) -> String {
    let mut out = String::new();
    for row in top_down_rows(field.values()) {
        let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Parses the CSV written by [`write_field_csv`] back into internal row order.
pub fn read_field_csv(text: &str) -> Result<Raster> {
    let rows = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.split(',').map(|s| parse_number(s, i + 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    from_top_down_rows(rows)
}

/// ESRI ASCII grid. Cells must be square.
pub fn write_field_asciigrid(field: &BenefitField) -> Result<String> {
    let g = field.grid();
    let (dx, dy) = (g.cell_width(), g.cell_height());
    if (dx - dy).abs() > 1e-12 * dx.max(dy) {
        return Err(Error::Unsupported(format!(
            "ASCII grids need square cells, got {dx} x {dy}"
        )));
    }
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", g.nx());
    let _ = writeln!(out, "nrows {}", g.ny());
    let _ = writeln!(out, "xllcorner {}", format_number(g.x_min()));
    let _ = writeln!(out, "yllcorner {}", format_number(g.y_min()));
    let _ = writeln!(out, "cellsize {}", format_number(dx));
    let _ = writeln!(out, "NODATA_value {NODATA}");
    for row in top_down_rows(field.values()) {
        let line: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Reads an ESRI ASCII grid. Values are taken literally; no-data cells are
/// not interpreted.
pub fn read_field_asciigrid(text: &str) -> Result<(Grid, Raster)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut header = std::collections::HashMap::new();
    let mut first_data = None;
    for (i, line) in lines.by_ref() {
        let mut parts = line.split_whitespace();
        let key = parts.next().unwrap_or_default().to_ascii_lowercase();
        if key.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            let value = parts
                .next()
                .ok_or_else(|| Error::Format(format!("line {}: header {key} has no value", i + 1)))?;
            header.insert(key, parse_number(value, i + 1)?);
        } else {
            first_data = Some((i, line));
            break;
        }
    }
    let get = |k: &str| {
        header
            .get(k)
            .copied()
            .ok_or_else(|| Error::Format(format!("missing header {k}")))
    };
    let nx = get("ncols")? as usize;
    let ny = get("nrows")? as usize;
    let (x0, y0, cell) = (get("xllcorner")?, get("yllcorner")?, get("cellsize")?);
    let grid = Grid::new(x0, x0 + cell * nx as f64, y0, y0 + cell * ny as f64, nx, ny)?;

    let rows = first_data
        .into_iter()
        .chain(lines)
        .map(|(i, l)| l.split_whitespace().map(|s| parse_number(s, i + 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let values = from_top_down_rows(rows)?;
    if !values.has_shape(ny, nx) {
        return Err(Error::Format(format!(
            "header declares {ny}x{nx} cells, body has {}x{}",
            values.ny(),
            values.nx()
        )));
    }
    Ok((grid, values))
}
