//! Statistics over benefit fields, scenario comparison and mobility
//! preference sweeps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{compute_field, BenefitField};
use crate::geometry::Raster;
use crate::scenario::{check_efficiency, EfficiencyModel, Kernel, Scenario};

/// Total, mean, extremes and (when defined) the uniformity coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldStats {
    pub total: f64,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub uniformity: Option<f64>,
}

/// `1 - σ/μ` over the cell values, with the population standard deviation.
///
/// Equals 1 for a perfectly uniform field and may go negative when the
/// spread exceeds the mean. Fields carrying disamenity contributions are
/// rejected: amenities and disamenities should be assessed separately.
pub fn uniformity_coefficient(field: &BenefitField) -> Result<f64> {
    if field.has_disamenities() {
        return Err(Error::DisamenityContribution);
    }
    let values = field.values().as_slice();
    if values.is_empty() {
        return Err(Error::UndefinedStatistic("empty field".into()));
    }
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if mean == 0.0 {
        return Err(Error::UndefinedStatistic("uniformity is undefined for a zero-mean field".into()));
    }
    // the rounded mean of equal values need not equal them
    if values.iter().all(|&v| v == values[0]) {
        return Ok(1.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    Ok(1.0 - var.sqrt() / mean)
}

pub fn field_stats(field: &BenefitField) -> Result<FieldStats> {
    let values = field.values().as_slice();
    if values.is_empty() {
        return Err(Error::UndefinedStatistic("empty field".into()));
    }
    let total: f64 = values.iter().sum();
    let mean = total / values.len() as f64;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FieldStats {
        total,
        mean,
        max,
        min,
        uniformity: uniformity_coefficient(field).ok(),
    })
}

/// Per-cell gain between two fields computed on the same grid under the
/// same mobility assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDiff {
    pub before_name: String,
    pub after_name: String,
    /// `after - before`, shape `(ny, nx)`.
    pub delta: Raster,
    pub stats_before: FieldStats,
    pub stats_after: FieldStats,
    pub gain_total: f64,
}

pub fn diff_scenarios(before: &BenefitField, after: &BenefitField) -> Result<ScenarioDiff> {
    if before.grid() != after.grid() {
        return Err(Error::Incompatible("the two fields are defined on different grids".into()));
    }
    if before.mobility_fingerprint() != after.mobility_fingerprint() {
        return Err(Error::Incompatible(format!(
            "mobility differs: {} vs {}",
            before.mobility_fingerprint(),
            after.mobility_fingerprint()
        )));
    }
    let stats_before = field_stats(before)?;
    let stats_after = field_stats(after)?;
    Ok(ScenarioDiff {
        before_name: before.scenario_name().to_owned(),
        after_name: after.scenario_name().to_owned(),
        delta: after.values().zip_with(before.values(), |a, b| a - b),
        gain_total: stats_after.total - stats_before.total,
        stats_before,
        stats_after,
    })
}

/// Summary of a before/after comparison as reported by the command line
/// and the HTTP API.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub before: String,
    pub after: String,
    pub gain_total: f64,
    pub stats_before: FieldStats,
    pub stats_after: FieldStats,
    pub histogram_before: Histogram,
    pub histogram_after: Histogram,
}

impl CompareReport {
    pub fn new(diff: &ScenarioDiff, before: &BenefitField, after: &BenefitField, bins: usize) -> Result<Self> {
        Ok(CompareReport {
            before: diff.before_name.clone(),
            after: diff.after_name.clone(),
            gain_total: diff.gain_total,
            stats_before: diff.stats_before.clone(),
            stats_after: diff.stats_after.clone(),
            histogram_before: field_histogram(before, bins)?,
            histogram_after: field_histogram(after, bins)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Equal-width histogram of the cell values over `[min, max]`.
///
/// Bins are half-open except the last, which is closed. When every value
/// is equal the range is widened symmetrically around that value so the
/// edges stay strictly ascending.
pub fn field_histogram(field: &BenefitField, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::invalid("bins", "must be at least 1"));
    }
    let values = field.values().as_slice();
    let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        let half = 0.5 * lo.abs().max(1.0);
        lo -= half;
        hi += half;
    }
    let width = hi - lo;
    let bin_edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 / bins as f64 })
        .collect();
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = ((v - lo) / width * bins as f64).floor();
        let idx = if idx < 0.0 { 0 } else { (idx as usize).min(bins - 1) };
        counts[idx] += 1;
    }
    Ok(Histogram { bin_edges, counts })
}

/// Cell values flattened row-major and sorted in descending order.
pub fn sorted_profile(field: &BenefitField) -> Vec<f64> {
    let mut v = field.values().as_slice().to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Row-major index and value of the field maximum; the first cell wins ties.
pub fn argmax(field: &BenefitField) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in field.values().as_slice().iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub efficiency: f64,
    /// Row-major cell index of the maximum.
    pub argmax: usize,
    pub max_value: f64,
}

/// Recomputes the field for each `E` and reports where the benefit peaks.
///
/// Low `E` rewards proximity to a single amenity; high `E` rewards cells
/// that reach many amenities with similar effort.
pub fn preference_sweep(scenario: &Scenario, efficiencies: &[f64]) -> Result<Vec<SweepPoint>> {
    if scenario.mobility.kernel != Kernel::Rational {
        return Err(Error::Unsupported("preference sweeps use the rational kernel".into()));
    }
    if !matches!(scenario.mobility.efficiency, EfficiencyModel::Uniform(_)) {
        return Err(Error::Unsupported("preference sweeps require a uniform E".into()));
    }
    if efficiencies.is_empty() {
        return Err(Error::invalid("E_values", "at least one value is required"));
    }
    efficiencies
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            check_efficiency(&format!("E_values[{i}]"), e)?;
            let mut s = scenario.clone();
            s.mobility.efficiency = EfficiencyModel::Uniform(e);
            let field = compute_field(&s)?;
            let (argmax, max_value) = argmax(&field);
            Ok(SweepPoint {
                efficiency: e,
                argmax,
                max_value,
            })
        })
        .collect()
}
