//! HTTP API over the isobenefit engine.
//!
//! Sessions hold a scenario and a revision counter. Every successful
//! mutation bumps the revision by one; writers pass the revision they last
//! saw and get `409` when it is stale. Reads work on immutable snapshots
//! and computed fields are cached per `(session, revision, weighted)`.
//!
//! | method | path | |
//! |---|---|---|
//! | `POST` | `/sessions` | create from a scenario document |
//! | `GET` | `/sessions` | list sessions |
//! | `GET`, `DELETE` | `/sessions/{id}` | export or drop a session |
//! | `PATCH` | `/sessions/{id}/amenities` | add / move / remove / update batch |
//! | `PATCH` | `/sessions/{id}/mobility` | replace the mobility block |
//! | `GET` | `/sessions/{id}/field?weighted=bool` | grid, row-major values, stats |
//! | `GET` | `/sessions/{id}/contours?auto=N` or `?levels=a,b` | GeoJSON |
//! | `GET` | `/sessions/{id}/compare?against=ID&bins=N` | diff against a baseline |
//!
//! Field values are row-major with row 0 at `y_min`, matching the scenario
//! document's arrays.

use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use dashmap::DashMap;
use isobenefit_core::io::{read_scenario, write_isolines_geojson, GridDocument, ScenarioDocument};
use isobenefit_core::{
    auto_levels, diff_scenarios, extract_isolines, field_stats, scenario_field, BenefitField, CompareReport,
    FieldStats, Grid, Warning,
};
use lru::LruCache;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub mod session;

use session::{apply_ops, AmenityPatch, MobilityPatch, Session, Snapshot};

pub const REVISION_HEADER: &str = "x-isobenefit-revision";

type CacheKey = (String, u64, bool);

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    sessions: DashMap<String, Arc<Session>>,
    cache: Mutex<LruCache<CacheKey, Arc<BenefitField>>>,
}

impl AppState {
    pub fn new(cache_size: NonZeroUsize) -> Self {
        AppState {
            inner: Arc::new(Inner {
                sessions: DashMap::new(),
                cache: Mutex::new(LruCache::new(cache_size)),
            }),
        }
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.inner
            .sessions
            .get(id)
            .map(|s| s.value().clone())
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session '{id}'")))
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.len()
    }

    /// Serialises every session, ordered by id.
    pub fn export_sessions(&self) -> String {
        let mut sessions: Vec<StoredSession> = self
            .inner
            .sessions
            .iter()
            .map(|entry| {
                let snap = entry.value().snapshot();
                StoredSession {
                    session_id: entry.key().clone(),
                    revision: snap.revision,
                    scenario: ScenarioDocument::from_scenario(&snap.scenario),
                }
            })
            .collect();
        sessions.sort_by(|a, b| a.session_id.cmp(&b.session_id));
        serde_json::to_string_pretty(&SnapshotFile { sessions }).expect("snapshot serialises")
    }

    /// Loads sessions written by [`AppState::export_sessions`].
    pub fn restore_sessions(&self, text: &str) -> Result<usize, String> {
        let file: SnapshotFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let n = file.sessions.len();
        for stored in file.sessions {
            let scenario = stored
                .scenario
                .into_scenario()
                .map_err(|e| format!("session {}: {e}", stored.session_id))?;
            self.inner
                .sessions
                .insert(stored.session_id, Arc::new(Session::new(scenario, stored.revision)));
        }
        Ok(n)
    }

    async fn field(&self, id: &str, snap: &Arc<Snapshot>, weighted: bool) -> Result<Arc<BenefitField>, ApiError> {
        let key = (id.to_owned(), snap.revision, weighted);
        if let Some(f) = self.inner.cache.lock().unwrap_or_else(|p| p.into_inner()).get(&key) {
            return Ok(f.clone());
        }
        let snap = snap.clone();
        let field = tokio::task::spawn_blocking(move || scenario_field(&snap.scenario, weighted))
            .await
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
        let field = Arc::new(field);
        self.inner
            .cache
            .lock()
            .unwrap_or_else(|p| p.into_inner())
            .put(key, field.clone());
        Ok(field)
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    sessions: Vec<StoredSession>,
}

#[derive(Serialize, Deserialize)]
struct StoredSession {
    session_id: String,
    revision: u64,
    scenario: ScenarioDocument,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    revision: Option<u64>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            revision: None,
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }
}

impl From<isobenefit_core::Error> for ApiError {
    fn from(e: isobenefit_core::Error) -> Self {
        let status = match e {
            isobenefit_core::Error::Incompatible(_) => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    revision: Option<u64>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: &self.message,
            revision: self.revision,
        };
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/amenities", patch(patch_amenities))
        .route("/sessions/{id}/mobility", patch(patch_mobility))
        .route("/sessions/{id}/field", get(get_field))
        .route("/sessions/{id}/contours", get(get_contours))
        .route("/sessions/{id}/compare", get(get_compare))
        .layer(DefaultBodyLimit::max(64 << 20))
        .with_state(state)
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "body".to_owned() } else { path };
        ApiError::bad_request(format!("{path}: {}", e.into_inner()))
    })
}

/// Serialises in declaration order so equal inputs give equal bytes.
fn json_response<T: Serialize>(body: &T) -> ApiResult<Response> {
    let bytes = serde_json::to_vec(body).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], bytes).into_response())
}

fn grid_document(g: &Grid) -> GridDocument {
    GridDocument {
        x_min: g.x_min(),
        x_max: g.x_max(),
        y_min: g.y_min(),
        y_max: g.y_max(),
        nx: g.nx(),
        ny: g.ny(),
    }
}

#[derive(Serialize)]
struct Created {
    session_id: String,
    revision: u64,
    warnings: Vec<Warning>,
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<Created>)> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::bad_request(format!("body: {e}")))?;
    let scenario = read_scenario(text)?;
    let warnings = scenario.validate()?;
    let id = uuid::Uuid::new_v4().to_string();
    state.inner.sessions.insert(id.clone(), Arc::new(Session::new(scenario, 0)));
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id: id,
            revision: 0,
            warnings,
        }),
    ))
}

#[derive(Serialize)]
struct SessionSummary {
    session_id: String,
    revision: u64,
    name: String,
}

async fn list_sessions(State(state): State<AppState>) -> Json<Vec<SessionSummary>> {
    let mut out: Vec<SessionSummary> = state
        .inner
        .sessions
        .iter()
        .map(|entry| {
            let snap = entry.value().snapshot();
            SessionSummary {
                session_id: entry.key().clone(),
                revision: snap.revision,
                name: snap.scenario.name.clone(),
            }
        })
        .collect();
    out.sort_by(|a, b| a.session_id.cmp(&b.session_id));
    Json(out)
}

#[derive(Serialize)]
struct SessionExport {
    session_id: String,
    revision: u64,
    scenario: ScenarioDocument,
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionExport>> {
    let snap = state.session(&id)?.snapshot();
    Ok(Json(SessionExport {
        session_id: id,
        revision: snap.revision,
        scenario: ScenarioDocument::from_scenario(&snap.scenario),
    }))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    state
        .inner
        .sessions
        .remove(&id)
        .map(|_| StatusCode::NO_CONTENT)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session '{id}'")))
}

#[derive(Serialize)]
struct Mutated {
    revision: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    added: Vec<String>,
    warnings: Vec<Warning>,
}

fn stale(expected: u64, current: u64) -> ApiError {
    ApiError {
        status: StatusCode::CONFLICT,
        message: format!("expected revision {expected} but the session is at revision {current}"),
        revision: Some(current),
    }
}

async fn patch_amenities(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Mutated>> {
    let session = state.session(&id)?;
    let patch: AmenityPatch = parse_body(&body)?;
    let mut current = session.lock();
    if current.revision != patch.expected_revision {
        return Err(stale(patch.expected_revision, current.revision));
    }
    let mut scenario = current.scenario.clone();
    let added = apply_ops(&mut scenario, &patch.ops).map_err(ApiError::bad_request)?;
    let warnings = scenario.validate()?;
    let revision = current.revision + 1;
    *current = Arc::new(Snapshot { scenario, revision });
    Ok(Json(Mutated {
        revision,
        added,
        warnings,
    }))
}

async fn patch_mobility(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<Mutated>> {
    let session = state.session(&id)?;
    let patch: MobilityPatch = parse_body(&body)?;
    let mut current = session.lock();
    if current.revision != patch.expected_revision {
        return Err(stale(patch.expected_revision, current.revision));
    }
    let mut scenario = current.scenario.clone();
    scenario.mobility = patch.mobility.to_config(scenario.grid.ny(), scenario.grid.nx())?;
    let warnings = scenario.validate()?;
    let revision = current.revision + 1;
    *current = Arc::new(Snapshot { scenario, revision });
    Ok(Json(Mutated {
        revision,
        added: Vec::new(),
        warnings,
    }))
}

#[derive(Deserialize)]
struct FieldQuery {
    #[serde(default)]
    weighted: bool,
}

#[derive(Serialize)]
struct FieldBody<'a> {
    session_id: &'a str,
    revision: u64,
    scenario: &'a str,
    mobility: &'a str,
    weighted: bool,
    grid: GridDocument,
    values: &'a [f64],
    stats: FieldStats,
    warnings: Vec<Warning>,
}

async fn get_field(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<FieldQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(query) = query?;
    let snap = state.session(&id)?.snapshot();
    let field = state.field(&id, &snap, query.weighted).await?;
    let body = FieldBody {
        session_id: &id,
        revision: snap.revision,
        scenario: &snap.scenario.name,
        mobility: field.mobility_fingerprint(),
        weighted: query.weighted,
        grid: grid_document(field.grid()),
        values: field.values().as_slice(),
        stats: field_stats(&field)?,
        warnings: snap.scenario.validate()?,
    };
    json_response(&body)
}

#[derive(Deserialize)]
struct ContourQuery {
    auto: Option<usize>,
    levels: Option<String>,
}

fn parse_levels(text: &str) -> ApiResult<Vec<f64>> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(ApiError::bad_request(format!("levels[{i}]: '{s}' is not a finite number"))),
        })
        .collect()
}

async fn get_contours(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<ContourQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(query) = query?;
    let snap = state.session(&id)?.snapshot();
    let field = state.field(&id, &snap, false).await?;
    let levels = match (query.auto, query.levels) {
        (Some(0), None) => return Err(ApiError::bad_request("auto: must be at least 1")),
        (Some(n), None) => auto_levels(&field, n),
        (None, Some(text)) => parse_levels(&text)?,
        _ => return Err(ApiError::bad_request("exactly one of 'auto' and 'levels' is required")),
    };
    let sets = extract_isolines(&field, &levels)?;
    let body = write_isolines_geojson(&sets, field.grid());
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("application/geo+json")),
            (
                header::HeaderName::from_static(REVISION_HEADER),
                HeaderValue::from(snap.revision),
            ),
        ],
        body,
    )
        .into_response())
}

#[derive(Deserialize)]
struct CompareQuery {
    against: String,
    #[serde(default = "default_bins")]
    bins: usize,
}

fn default_bins() -> usize {
    10
}

#[derive(Serialize)]
struct SessionRef<'a> {
    session_id: &'a str,
    revision: u64,
}

#[derive(Serialize)]
struct CompareBody<'a> {
    #[serde(flatten)]
    report: CompareReport,
    mobility: &'a str,
    before_session: SessionRef<'a>,
    after_session: SessionRef<'a>,
    delta: &'a [f64],
}

async fn get_compare(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<CompareQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(query) = query?;
    let after_snap = state.session(&id)?.snapshot();
    let before_snap = state.session(&query.against)?.snapshot();
    let after = state.field(&id, &after_snap, false).await?;
    let before = state.field(&query.against, &before_snap, false).await?;
    let diff = diff_scenarios(&before, &after)?;
    let body = CompareBody {
        report: CompareReport::new(&diff, &before, &after, query.bins)?,
        mobility: before.mobility_fingerprint(),
        before_session: SessionRef {
            session_id: &query.against,
            revision: before_snap.revision,
        },
        after_session: SessionRef {
            session_id: &id,
            revision: after_snap.revision,
        },
        delta: diff.delta.as_slice(),
    };
    json_response(&body)
}
