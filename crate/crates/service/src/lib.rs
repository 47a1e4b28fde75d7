//! HTTP service for interactive games: a human plays Builder or Arsonist
//! against the engine strategies.
//!
//! Routes:
//! - `POST /api/games` creates a session.
//! - `GET /api/games/{id}?since=<n>` returns the state, or the delta after turn `n`.
//! - `POST /api/games/{id}/move` submits the human's move.
//! - `POST /api/games/{id}/step` plays engine sub-steps (`{"turns": k}`).
//! - `GET /api/games/{id}/trace.csv` returns the trace.
//! - `GET /api/presets` lists the harness presets and strategy names.

pub mod error;
pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::QueryRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, Method, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use pyreline_core::engine::trace_csv;
use pyreline_core::strategies::{ARSONIST_NAMES, BUILDER_NAMES, HUMAN};
use pyreline_harness::presets::{preset, PRESET_NAMES};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{Any, CorsLayer};

pub use error::ApiError;
pub use session::{CreateRequest, HumanMove, HumanRole, LogEntry, Session};

/// Upper bound on turns per step request.
pub const MAX_STEP_TURNS: u64 = 10_000;

#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<Registry>,
}

#[derive(Default)]
struct Registry {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    data_dir: Option<PathBuf>,
}

impl AppState {
    /// In-memory only; nothing survives a restart.
    pub fn ephemeral() -> Self {
        Self::default()
    }

    /// Persists every session under `dir`, first replaying the logs already
    /// there. Logs that fail to replay are skipped with a warning.
    pub fn with_data_dir(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        paths.sort();
        for path in paths {
            match Session::replay(&path) {
                Ok(s) => {
                    log::info!("restored game {} from {}", s.id, path.display());
                    sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                }
                Err(e) => log::warn!("skipping {}: {e}", path.display()),
            }
        }
        Ok(AppState {
            inner: Arc::new(Registry {
                sessions: RwLock::new(sessions),
                data_dir: Some(dir.to_path_buf()),
            }),
        })
    }

    /// `PYRELINE_DATA_DIR` if set, otherwise in-memory.
    pub fn from_env() -> std::io::Result<Self> {
        match std::env::var_os("PYRELINE_DATA_DIR") {
            Some(dir) => Self::with_data_dir(Path::new(&dir)),
            None => Ok(Self::ephemeral()),
        }
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.inner.sessions.read().expect("registry lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.inner
            .sessions
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_game(id))
    }

    fn create(&self, request: CreateRequest) -> Result<Value, ApiError> {
        let id = loop {
            let id = format!("{:016x}", rand::random::<u64>());
            if !self.inner.sessions.read().expect("registry lock").contains_key(&id) {
                break id;
            }
        };
        let session = Session::create(id.clone(), request, self.inner.data_dir.as_deref())?;
        let state = session.state(None);
        self.inner
            .sessions
            .write()
            .expect("registry lock")
            .insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(json!({ "game_id": id, "state": state }))
    }
}

fn with_session<T>(state: &AppState, id: &str, f: impl FnOnce(&mut Session) -> T) -> Result<T, ApiError> {
    let session = state.session(id)?;
    let mut guard = session
        .lock()
        .map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(f(&mut guard))
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", e.to_string(), json!({})))
}

async fn create_game(State(state): State<AppState>, body: String) -> Result<impl IntoResponse, ApiError> {
    let request: CreateRequest = parse_body(&body)?;
    Ok((StatusCode::CREATED, Json(state.create(request)?)))
}

#[derive(Debug, Deserialize)]
struct SinceQuery {
    since: Option<u64>,
}

async fn get_game(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<SinceQuery>, QueryRejection>,
) -> Result<Json<Value>, ApiError> {
    let Query(q) = query.map_err(|e| {
        ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", e.body_text(), json!({ "field": "since" }))
    })?;
    with_session(&state, &id, |s| Json(s.state(q.since)))
}

async fn submit_move(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: String,
) -> Result<Json<Value>, ApiError> {
    let value: Value = parse_body(&body)?;
    let mv = HumanMove::from_json(&value)?;
    with_session(&state, &id, |s| {
        let before = s.game().turns_completed();
        let completed = s.submit(&mv)?;
        Ok(Json(json!({
            "completed": completed.iter().map(session::record_json).collect::<Vec<_>>(),
            "state": s.state(Some(before)),
        })))
    })?
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRequest {
    #[serde(default = "one")]
    turns: u64,
}

fn one() -> u64 {
    1
}

async fn step_game(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    body: String,
) -> Result<Json<Value>, ApiError> {
    let req: StepRequest = if body.trim().is_empty() {
        StepRequest { turns: 1 }
    } else {
        parse_body(&body)?
    };
    if req.turns == 0 || req.turns > MAX_STEP_TURNS {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "BadRequest",
            format!("turns must lie in 1..={MAX_STEP_TURNS}"),
            json!({ "field": "turns" }),
        ));
    }
    with_session(&state, &id, |s| {
        let before = s.game().turns_completed();
        let completed = s.step(req.turns)?;
        Ok(Json(json!({
            "completed": completed.iter().map(session::record_json).collect::<Vec<_>>(),
            "state": s.state(Some(before)),
        })))
    })?
}

async fn trace(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<impl IntoResponse, ApiError> {
    let csv = with_session(&state, &id, |s| trace_csv(s.game().trace()))?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], csv))
}

async fn presets() -> Json<Value> {
    let presets: Vec<Value> = PRESET_NAMES
        .iter()
        .map(|name| json!({ "name": name, "preset": preset(name) }))
        .collect();
    Json(json!({
        "presets": presets,
        "builders": BUILDER_NAMES.iter().copied().chain([HUMAN]).collect::<Vec<_>>(),
        "arsonists": ARSONIST_NAMES.iter().copied().chain([HUMAN]).collect::<Vec<_>>(),
    }))
}

async fn fallback() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such route", Value::Null)
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/games", post(create_game))
        .route("/api/games/{id}", get(get_game))
        .route("/api/games/{id}/move", post(submit_move))
        .route("/api/games/{id}/step", post(step_game))
        .route("/api/games/{id}/trace.csv", get(trace))
        .route("/api/presets", get(presets))
        .fallback(fallback)
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
