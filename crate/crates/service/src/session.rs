//! Sessions and the amenity edit operations applied to them.

use std::collections::HashSet;
use std::sync::{Arc, Mutex, MutexGuard};

use isobenefit_core::io::MobilityDocument;
use isobenefit_core::{Amenity, Point, Scenario};
use serde::Deserialize;

/// Immutable view of a session at one revision. Readers clone the `Arc`
/// and never observe a partially applied batch.
#[derive(Debug)]
pub struct Snapshot {
    pub scenario: Scenario,
    pub revision: u64,
}

#[derive(Debug)]
pub struct Session {
    current: Mutex<Arc<Snapshot>>,
}

impl Session {
    pub fn new(scenario: Scenario, revision: u64) -> Self {
        Session {
            current: Mutex::new(Arc::new(Snapshot { scenario, revision })),
        }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.lock().clone()
    }

    /// Holding the guard serialises writers on this session only.
    pub fn lock(&self) -> MutexGuard<'_, Arc<Snapshot>> {
        self.current.lock().unwrap_or_else(|p| p.into_inner())
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmenityOp {
    Add {
        #[serde(default)]
        id: Option<String>,
        x: f64,
        y: f64,
        #[serde(rename = "A")]
        a: f64,
        #[serde(default)]
        label: Option<String>,
    },
    Move {
        id: String,
        x: f64,
        y: f64,
    },
    Remove {
        id: String,
    },
    Update {
        id: String,
        #[serde(rename = "A", default)]
        a: Option<f64>,
        #[serde(default)]
        label: Option<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmenityPatch {
    pub expected_revision: u64,
    pub ops: Vec<AmenityOp>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobilityPatch {
    pub expected_revision: u64,
    pub mobility: MobilityDocument,
}

fn fresh_id(taken: &HashSet<String>) -> String {
    (1..)
        .map(|n| format!("amenity-{n}"))
        .find(|id| !taken.contains(id))
        .expect("unbounded id space")
}

/// Applies the whole batch to a copy of `scenario`. Returns the ids of
/// added amenities; errors name the failing operation as `ops[i]`.
pub fn apply_ops(scenario: &mut Scenario, ops: &[AmenityOp]) -> Result<Vec<String>, String> {
    if ops.is_empty() {
        return Err("ops: at least one operation is required".into());
    }
    let mut taken: HashSet<String> = scenario.amenities.iter().map(|a| a.id.clone()).collect();
    let mut added = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        let find = |scenario: &Scenario, id: &str| {
            scenario
                .amenities
                .iter()
                .position(|a| a.id == id)
                .ok_or_else(|| format!("ops[{i}].id: no amenity with id '{id}'"))
        };
        match op {
            AmenityOp::Add { id, x, y, a, label } => {
                let id = match id {
                    Some(id) if taken.contains(id) => {
                        return Err(format!("ops[{i}].id: amenity '{id}' already exists"));
                    }
                    Some(id) => id.clone(),
                    None => fresh_id(&taken),
                };
                taken.insert(id.clone());
                added.push(id.clone());
                scenario.amenities.push(Amenity {
                    id,
                    position: Point::new(*x, *y),
                    punctual_benefit: *a,
                    label: label.clone(),
                });
            }
            AmenityOp::Move { id, x, y } => {
                let k = find(scenario, id)?;
                scenario.amenities[k].position = Point::new(*x, *y);
            }
            AmenityOp::Remove { id } => {
                let k = find(scenario, id)?;
                taken.remove(id);
                scenario.amenities.remove(k);
            }
            AmenityOp::Update { id, a, label } => {
                let k = find(scenario, id)?;
                if let Some(a) = a {
                    scenario.amenities[k].punctual_benefit = *a;
                }
                if label.is_some() {
                    scenario.amenities[k].label = label.clone();
                }
            }
        }
    }
    Ok(added)
}
