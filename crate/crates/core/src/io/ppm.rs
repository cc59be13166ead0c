use serde::{Deserialize, Serialize};

use super::top_down_rows;
use crate::field::BenefitField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colormap {
    #[default]
    Grayscale,
    Viridis,
}

// Samples of the viridis map at 0, 1/8, ..., 1.
const VIRIDIS: [[f64; 3]; 9] = [
    [68.0, 1.0, 84.0],
    [71.0, 44.0, 122.0],
    [59.0, 81.0, 139.0],
    [44.0, 113.0, 142.0],
    [33.0, 144.0, 141.0],
    [39.0, 173.0, 129.0],
    [92.0, 200.0, 99.0],
    [170.0, 220.0, 50.0],
    [253.0, 231.0, 37.0],
];

impl Colormap {
    fn rgb(&self, t: f64) -> [u8; 3] {
        let t = t.clamp(0.0, 1.0);
        match self {
            Colormap::Grayscale => {
                let g = (t * 255.0).round() as u8;
                [g, g, g]
            }
            Colormap::Viridis => {
                let pos = t * (VIRIDIS.len() - 1) as f64;
                let i = (pos.floor() as usize).min(VIRIDIS.len() - 2);
                let f = pos - i as f64;
                let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
                [0, 1, 2].map(|k| (a[k] + (b[k] - a[k]) * f).round() as u8)
            }
        }
    }
}

/// Binary PPM (P6), one pixel per cell, top row of the city first. Values
/// are min-max normalised; a constant field renders at mid-scale.
pub fn write_heatmap_ppm(field: &BenefitField, colormap: Colormap) -> Vec<u8> {
    let values = field.values();
    let min = values.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.as_slice().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = format!("P6\n{} {}\n255\n", values.nx(), values.ny()).into_bytes();
    out.reserve(values.len() * 3);
    for row in top_down_rows(values) {
        for &v in row {
            let t = if max > min { (v - min) / (max - min) } else { 0.5 };
            out.extend_from_slice(&colormap.rgb(t));
        }
    }
    out
}
