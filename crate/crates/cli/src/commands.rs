use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use isobenefit_core::io::{
    format_number, read_scenario, write_field_asciigrid, write_field_csv, write_heatmap_ppm,
    write_isolines_geojson, Colormap,
};
use isobenefit_core::{
    auto_levels, diff_scenarios, extract_isolines, field_stats, scenario_field, sorted_profile,
    uniformity_coefficient, CompareReport, FieldStats, Scenario,
};
use serde::Serialize;

use crate::FieldFormat;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<isobenefit_core::Error> for Failure {
    fn from(e: isobenefit_core::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_error(path, e))
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let scenario = read_scenario(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    for w in scenario.validate()? {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(scenario)
}

fn to_line<T: Serialize>(value: &T) -> Outcome {
    serde_json::to_string(value).map_err(|e| Failure::Validation(e.to_string()))
}

#[derive(Serialize)]
struct FieldLine<'a> {
    scenario: &'a str,
    mobility: &'a str,
    weighted: bool,
    format: &'a str,
    output: String,
    #[serde(flatten)]
    stats: FieldStats,
}

pub fn field(
    scenario_path: &Path,
    format: FieldFormat,
    output: Option<PathBuf>,
    weighted: bool,
    colormap: Colormap,
) -> Outcome {
    let scenario = load(scenario_path)?;
    let field = scenario_field(&scenario, weighted)?;
    let stats = field_stats(&field)?;
    let bytes = match format {
        FieldFormat::Csv => write_field_csv(&field).into_bytes(),
        FieldFormat::Asciigrid => write_field_asciigrid(&field)?.into_bytes(),
        FieldFormat::Ppm => write_heatmap_ppm(&field, colormap),
    };
    let output = output.unwrap_or_else(|| {
        let stem = scenario_path.file_stem().unwrap_or_default().to_string_lossy();
        PathBuf::from(format!("{stem}.{}", format.extension()))
    });
    write_file(&output, &bytes)?;
    to_line(&FieldLine {
        scenario: &scenario.name,
        mobility: field.mobility_fingerprint(),
        weighted,
        format: format.extension(),
        output: output.display().to_string(),
        stats,
    })
}

#[derive(Serialize)]
struct ContoursLine<'a> {
    scenario: &'a str,
    mobility: &'a str,
    level_count: usize,
    levels: &'a [f64],
    features: usize,
    output: String,
}

pub fn contours(scenario_path: &Path, levels: Option<Vec<f64>>, auto: Option<usize>, out: &Path) -> Outcome {
    let scenario = load(scenario_path)?;
    let field = scenario_field(&scenario, false)?;
    let levels = match (levels, auto) {
        (Some(levels), None) => levels,
        (None, Some(0)) => return Err(Failure::Validation("--auto: must be at least 1".into())),
        (None, Some(n)) => auto_levels(&field, n),
        _ => return Err(Failure::Validation("exactly one of --levels and --auto is required".into())),
    };
    if let Some(bad) = levels.iter().find(|l| !l.is_finite()) {
        return Err(Failure::Validation(format!("--levels: {bad} is not a finite number")));
    }
    let sets = extract_isolines(&field, &levels)?;
    write_file(out, write_isolines_geojson(&sets, field.grid()).as_bytes())?;
    to_line(&ContoursLine {
        scenario: &scenario.name,
        mobility: field.mobility_fingerprint(),
        level_count: levels.len(),
        levels: &levels,
        features: sets.iter().map(|s| s.polylines.len()).sum(),
        output: out.display().to_string(),
    })
}

#[derive(Serialize)]
struct Profiles {
    before: String,
    after: String,
}

#[derive(Serialize)]
struct CompareLine<'a> {
    #[serde(flatten)]
    report: CompareReport,
    mobility: &'a str,
    profiles: Profiles,
}

fn write_profile(dir: &Path, role: &str, values: &[f64]) -> Result<String, Failure> {
    let path = dir.join(format!("{role}.profile.csv"));
    let mut text = String::with_capacity(values.len() * 20);
    for &v in values {
        text.push_str(&format_number(v));
        text.push('\n');
    }
    write_file(&path, text.as_bytes())?;
    Ok(path.display().to_string())
}

pub fn compare(before_path: &Path, after_path: &Path, bins: usize, profile_dir: &Path) -> Outcome {
    let before = scenario_field(&load(before_path)?, false)?;
    let after = scenario_field(&load(after_path)?, false)?;
    let diff = diff_scenarios(&before, &after)?;
    let report = CompareReport::new(&diff, &before, &after, bins)?;
    fs::create_dir_all(profile_dir).map_err(|e| io_error(profile_dir, e))?;
    let profiles = Profiles {
        before: write_profile(profile_dir, "before", &sorted_profile(&before))?,
        after: write_profile(profile_dir, "after", &sorted_profile(&after))?,
    };
    to_line(&CompareLine {
        report,
        mobility: before.mobility_fingerprint(),
        profiles,
    })
}

#[derive(Serialize)]
struct UniformityLine<'a> {
    scenario: &'a str,
    mobility: &'a str,
    amenities_only: bool,
    uniformity: f64,
    total: f64,
    mean: f64,
    max: f64,
    min: f64,
}

pub fn uniformity(scenario_path: &Path, amenities_only: bool) -> Outcome {
    let mut scenario = load(scenario_path)?;
    if scenario.has_disamenities() {
        if !amenities_only {
            return Err(Failure::Validation(
                "the scenario contains disamenities (A < 0); the uniformity coefficient is only \
                 meaningful for non-negative benefit, so amenities and disamenities must be assessed \
                 separately. Rerun with --amenities-only to use the amenities alone."
                    .into(),
            ));
        }
        scenario = scenario.amenities_only();
    }
    let field = scenario_field(&scenario, false)?;
    let u = uniformity_coefficient(&field)?;
    let stats = field_stats(&field)?;
    to_line(&UniformityLine {
        scenario: &scenario.name,
        mobility: field.mobility_fingerprint(),
        amenities_only,
        uniformity: u,
        total: stats.total,
        mean: stats.mean,
        max: stats.max,
        min: stats.min,
    })
}
