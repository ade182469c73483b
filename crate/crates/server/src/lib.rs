//! HTTP front end for the annotation store.
//!
//! | method | path                         | body / query                       |
//! |--------|------------------------------|------------------------------------|
//! | GET    | `/tasks`                     | `annotator`, `n`, `type=comparison` |
//! | POST   | `/annotations`               | one annotation record              |
//! | POST   | `/judgments`                 | one comparison result              |
//! | GET    | `/stats`                     |                                    |
//! | GET    | `/kappa`                     | optional `raters`                  |
//! | GET    | `/health`                    |                                    |
//!
//! Writes go through a single lock so log appends are serialized; reads see
//! the state as of the last completed append.

use std::future::Future;
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chitchat_core::acute::ComparisonResult;
use chitchat_core::annotation::{AnnotationError, AnnotationRecord, AnnotationStore, KappaReport};
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;

pub type SharedStore = Arc<RwLock<AnnotationStore>>;

pub fn shared(store: AnnotationStore) -> SharedStore {
    Arc::new(RwLock::new(store))
}

const DEFAULT_BATCH: usize = 10;

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<AnnotationError> for ApiError {
    fn from(e: AnnotationError) -> Self {
        let status = match e {
            AnnotationError::Schema { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            AnnotationError::UnknownCandidate(_) | AnnotationError::UnknownTask(_) | AnnotationError::UnknownDialogue(_) => {
                StatusCode::NOT_FOUND
            }
            AnnotationError::InvalidBatchSize => StatusCode::BAD_REQUEST,
            AnnotationError::CorruptLog { .. } | AnnotationError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.body_text())
    }
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

#[derive(Debug, Deserialize)]
struct TasksQuery {
    annotator: Option<String>,
    judge: Option<String>,
    n: Option<usize>,
    #[serde(rename = "type")]
    kind: Option<String>,
}

async fn tasks(State(store): State<SharedStore>, Query(q): Query<TasksQuery>) -> Result<Response, ApiError> {
    let n = q.n.unwrap_or(DEFAULT_BATCH);
    let who = q.annotator.or(q.judge).ok_or_else(|| ApiError(StatusCode::BAD_REQUEST, "annotator is required".into()))?;
    let store = store.read().expect("store lock");
    match q.kind.as_deref() {
        Some("comparison") => Ok(Json(store.next_comparisons(&who, n)).into_response()),
        None | Some("annotation") => Ok(Json(store.next_tasks(&who, n)).into_response()),
        Some(other) => Err(ApiError(StatusCode::BAD_REQUEST, format!("unknown task type {other:?}"))),
    }
}

async fn annotations(
    State(store): State<SharedStore>,
    body: Result<Json<AnnotationRecord>, JsonRejection>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let Json(mut record) = body?;
    if record.timestamp == 0 {
        record.timestamp = now_ms();
    }
    store.write().expect("store lock").record_annotation(record)?;
    Ok(Json(json!({ "status": "ok" })))
}

async fn judgments(
    State(store): State<SharedStore>,
    body: Result<Json<ComparisonResult>, JsonRejection>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let Json(mut result) = body?;
    if result.timestamp == 0 {
        result.timestamp = now_ms();
    }
    store.write().expect("store lock").record_judgment(result)?;
    Ok(Json(json!({ "status": "ok" })))
}

async fn stats(State(store): State<SharedStore>) -> Response {
    Json(store.read().expect("store lock").stats()).into_response()
}

#[derive(Debug, Deserialize)]
struct KappaQuery {
    raters: Option<usize>,
}

async fn kappa(State(store): State<SharedStore>, Query(q): Query<KappaQuery>) -> Result<Response, ApiError> {
    let report: KappaReport<f64> = store
        .read()
        .expect("store lock")
        .kappa_report(q.raters)
        .map_err(|e| ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    Ok(Json(report).into_response())
}

async fn health() -> &'static str {
    "ok"
}

pub fn router(store: SharedStore) -> Router {
    Router::new()
        .route("/tasks", get(tasks))
        .route("/annotations", post(annotations))
        .route("/judgments", post(judgments))
        .route("/stats", get(stats))
        .route("/kappa", get(kappa))
        .route("/health", get(health))
        .with_state(store)
}

/// Serve until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    store: SharedStore,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(store)).with_graceful_shutdown(shutdown).await
}
