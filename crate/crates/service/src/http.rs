//! JSON-over-HTTP front end. Projects live in memory, optionally written
//! through to a directory; runs execute on the blocking pool and are polled.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use smaatri::io::{self, ProjectFile};
use smaatri::simos::{simos_resolve, CardDeck};
use smaatri::{AcceptabilityReport, Error};

use crate::engine::{self, RunRequest, WhatIfRequest};

pub const ADDR_ENV: &str = "SMAATRI_ADDR";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Queued,
    Running,
    Done,
    Failed,
}

/// Poll handle for an asynchronous run. `result` is present exactly when `status` is `done`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHandle {
    pub run_id: String,
    pub project_id: String,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Vec<AcceptabilityReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunHandle {
    fn is_active(&self) -> bool {
        matches!(self.status, RunStatus::Queued | RunStatus::Running)
    }
}

#[derive(Default)]
pub struct AppState {
    projects: RwLock<HashMap<String, Arc<ProjectFile>>>,
    runs: RwLock<HashMap<String, RunHandle>>,
    next_run: AtomicU64,
    dir: Option<PathBuf>,
}

impl AppState {
    /// Loads every `*.json` project in `dir`; new projects are written back there.
    pub fn with_dir(dir: impl Into<PathBuf>) -> smaatri::Result<Self> {
        let dir = dir.into();
        let state = Self {
            dir: Some(dir.clone()),
            ..Self::default()
        };
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let project = io::load_project(&path)?;
                let id = project_id(&project.name);
                state.projects.write().unwrap().insert(id, Arc::new(project));
            }
        }
        Ok(state)
    }

    pub fn project(&self, id: &str) -> Option<Arc<ProjectFile>> {
        self.projects.read().unwrap().get(id).cloned()
    }

    pub fn run(&self, id: &str) -> Option<RunHandle> {
        self.runs.read().unwrap().get(id).cloned()
    }

    /// Creates a queued handle for a run on `project_id`.
    pub fn register_run(&self, project_id: &str) -> String {
        let run_id = format!("run-{}", self.next_run.fetch_add(1, Ordering::Relaxed) + 1);
        self.runs.write().unwrap().insert(
            run_id.clone(),
            RunHandle {
                run_id: run_id.clone(),
                project_id: project_id.to_string(),
                status: RunStatus::Queued,
                result: None,
                error: None,
            },
        );
        run_id
    }

    fn update_run(&self, run_id: &str, f: impl FnOnce(&mut RunHandle)) {
        if let Some(h) = self.runs.write().unwrap().get_mut(run_id) {
            f(h);
        }
    }

    fn has_active_runs(&self, project_id: &str) -> bool {
        self.runs
            .read()
            .unwrap()
            .values()
            .any(|h| h.project_id == project_id && h.is_active())
    }
}

/// Project id: the project name lower-cased, with runs of other characters turned into `-`.
pub fn project_id(name: &str) -> String {
    let mut id = String::new();
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            id.push(ch.to_ascii_lowercase());
        } else if !id.ends_with('-') {
            id.push('-');
        }
    }
    let id = id.trim_matches('-').to_string();
    if id.is_empty() {
        "project".into()
    } else {
        id
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/projects", post(create_project))
        .route("/projects/{id}", get(get_project))
        .route("/projects/{id}/runs", post(start_run))
        .route("/projects/{id}/whatif", post(whatif))
        .route("/runs/{id}", get(get_run))
        .route("/weights/simos", post(simos))
        .with_state(state)
}

pub enum ApiError {
    Engine(Error),
    NotFound(String),
    Conflict(String),
    Internal(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Engine(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::Engine(Error::Validation(report)) => (
                StatusCode::BAD_REQUEST,
                Json(json!({ "error": "validation", "violations": report.violations })),
            )
                .into_response(),
            ApiError::Engine(e @ (Error::Io(_) | Error::Csv(_))) => (
                StatusCode::INTERNAL_SERVER_ERROR,
                Json(json!({ "error": e.to_string() })),
            )
                .into_response(),
            ApiError::Engine(e) => (StatusCode::BAD_REQUEST, Json(json!({ "error": e.to_string() }))).into_response(),
            ApiError::NotFound(what) => (StatusCode::NOT_FOUND, Json(json!({ "error": what }))).into_response(),
            ApiError::Conflict(what) => (StatusCode::CONFLICT, Json(json!({ "error": what }))).into_response(),
            ApiError::Internal(what) => {
                (StatusCode::INTERNAL_SERVER_ERROR, Json(json!({ "error": what }))).into_response()
            }
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: serde::de::DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    // An empty body means "all defaults" for the request types that allow it.
    let body = if body.iter().all(u8::is_ascii_whitespace) {
        b"{}".as_slice()
    } else {
        body
    };
    serde_json::from_slice(body).map_err(|e| ApiError::Engine(e.into()))
}

fn lookup(state: &AppState, id: &str) -> ApiResult<Arc<ProjectFile>> {
    state
        .project(id)
        .ok_or_else(|| ApiError::NotFound(format!("no project `{id}`")))
}

async fn create_project(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::Engine(Error::Config(e.to_string())))?;
    let project = io::parse_project(text)?;
    let id = project_id(&project.name);
    let status = {
        let mut projects = state.projects.write().unwrap();
        let replacing = projects.contains_key(&id);
        if replacing && state.has_active_runs(&id) {
            return Err(ApiError::Conflict(format!("project `{id}` has runs in progress")));
        }
        if let Some(dir) = &state.dir {
            io::save_project(&project, dir.join(format!("{id}.json")))?;
        }
        projects.insert(id.clone(), Arc::new(project));
        if replacing {
            StatusCode::OK
        } else {
            StatusCode::CREATED
        }
    };
    Ok((status, Json(json!({ "project_id": id }))))
}

async fn get_project(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<ProjectFile>> {
    Ok(Json((*lookup(&state, &id)?).clone()))
}

async fn start_run(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<RunHandle>)> {
    let project = lookup(&state, &id)?;
    let request: RunRequest = parse(&body)?;
    let prepared = engine::prepare(&project, &request)?;
    let run_id = state.register_run(&id);
    let handle = state.run(&run_id).expect("just registered");

    let worker_state = Arc::clone(&state);
    let rid = run_id.clone();
    tokio::task::spawn_blocking(move || {
        worker_state.update_run(&rid, |h| h.status = RunStatus::Running);
        let outcome = engine::run_prepared(&project, &prepared);
        worker_state.update_run(&rid, |h| match outcome {
            Ok(reports) => {
                h.status = RunStatus::Done;
                h.result = Some(reports);
            }
            Err(e) => {
                h.status = RunStatus::Failed;
                h.error = Some(e.to_string());
            }
        });
    });
    Ok((StatusCode::ACCEPTED, Json(handle)))
}

async fn get_run(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<RunHandle>> {
    state
        .run(&id)
        .map(Json)
        .ok_or_else(|| ApiError::NotFound(format!("no run `{id}`")))
}

async fn whatif(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<engine::WhatIfResponse>> {
    let project = lookup(&state, &id)?;
    let request: WhatIfRequest = parse(&body)?;
    let response = tokio::task::spawn_blocking(move || engine::whatif(&project, &request))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    Ok(Json(response))
}

async fn simos(body: Bytes) -> ApiResult<Json<smaatri::SimosWeights>> {
    let deck: CardDeck = parse(&body)?;
    Ok(Json(simos_resolve(&deck)?))
}

/// Binds to `addr` and serves until the process is stopped.
pub async fn serve(state: AppState, addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}
