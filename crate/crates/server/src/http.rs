//! HTTP resources over a shared `Service`.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Semaphore;

use crate::html::render_page;
use crate::service::{JobHandle, ProveRequest, Service, ServiceError, MAX_SOURCE_BYTES};

#[derive(Clone)]
pub struct AppState {
    pub service: Arc<Service>,
    /// Bounds background pipeline work and prover runs.
    pub pool: Arc<Semaphore>,
}

impl AppState {
    pub fn new(service: Arc<Service>) -> Self {
        let permits = service.config.workers.max(1);
        AppState {
            service,
            pool: Arc::new(Semaphore::new(permits)),
        }
    }

    /// Runs `f` on the blocking pool once a worker permit is free.
    async fn pooled<T: Send + 'static>(&self, f: impl FnOnce(&Service) -> T + Send + 'static) -> T {
        let _permit = self.pool.clone().acquire_owned().await.expect("pool is never closed");
        let svc = self.service.clone();
        tokio::task::spawn_blocking(move || f(&svc)).await.expect("pipeline task panicked")
    }

    /// Continues an interrupted or freshly verified job in the background.
    pub fn spawn_rest(&self, job: Arc<JobHandle>, front: bool) {
        let app = self.clone();
        tokio::spawn(async move {
            app.pooled(move |svc| {
                if !front || svc.run_front(&job) {
                    svc.run_generation(&job);
                }
            })
            .await;
        });
    }
}

pub struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let msg = self.0.to_string();
        let (status, body) = match &self.0 {
            ServiceError::BadRequest(_) => (StatusCode::BAD_REQUEST, json!({ "error": msg })),
            ServiceError::UnknownJob(_) | ServiceError::UnknownObligation(_) | ServiceError::UnknownItem(_) => {
                (StatusCode::NOT_FOUND, json!({ "error": msg }))
            }
            ServiceError::Conflict { state, .. } => (StatusCode::CONFLICT, json!({ "error": msg, "state": state })),
            ServiceError::Io { .. } | ServiceError::Internal(_) => {
                (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": msg }))
            }
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn json_text(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn plain(body: String) -> Response {
    ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], body).into_response()
}

fn wants_html(headers: &HeaderMap) -> bool {
    headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("text/html"))
}

/// Parses an optional JSON body; an empty body yields the default.
fn optional_body<T: DeserializeOwned + Default>(body: &Bytes) -> ApiResult<T> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError(ServiceError::BadRequest(format!("bad request body: {e}"))))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/articles", post(submit))
        .route("/articles/{id}", get(job_meta))
        .route("/articles/{id}/render", get(render))
        .route("/articles/{id}/log", get(log))
        .route("/articles/{id}/obligations", get(obligations))
        .route("/articles/{id}/obligations/{oid}/prove", post(prove))
        .route("/articles/{id}/obligations/{oid}/problem", get(problem))
        .route("/articles/{id}/obligations/{oid}/hints", post(hints))
        .route("/articles/{id}/runs/{file}", get(run_output))
        .route("/articles/{id}/install", post(install))
        .route("/library", get(library))
        .route("/library/{name}", get(library_item))
        .layer(DefaultBodyLimit::max(4 * MAX_SOURCE_BYTES))
        .with_state(state)
}

#[derive(Deserialize)]
struct Submission {
    text: String,
    name: Option<String>,
}

#[derive(Serialize)]
struct Submitted {
    id: String,
    state: crate::service::JobState,
}

/// Accepts `{"text": ..., "name": ...}` or, with any other content type,
/// the article text itself.
async fn submit(State(app): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult<Response> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let (text, name) = if is_json {
        let s: Submission = serde_json::from_slice(&body)
            .map_err(|e| ApiError(ServiceError::BadRequest(format!("bad submission: {e}"))))?;
        (s.text, s.name)
    } else {
        let text = String::from_utf8(body.to_vec())
            .map_err(|_| ApiError(ServiceError::BadRequest("article is not UTF-8".into())))?;
        (text, None)
    };
    let job = app.service.create_job(&text, name)?;
    if text.len() <= app.service.config.sync_limit {
        let j = job.clone();
        let ok = app.pooled(move |svc| svc.run_front(&j)).await;
        if ok {
            app.spawn_rest(job.clone(), false);
        }
    } else {
        app.spawn_rest(job.clone(), true);
    }
    let body = Submitted {
        id: job.id.clone(),
        state: job.state(),
    };
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn job_meta(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let job = app.service.job(&id)?;
    Ok(json_text(serde_json::to_string_pretty(&job.meta()).expect("meta serializes")))
}

async fn render(State(app): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> ApiResult<Response> {
    let model = app.service.render_json(&id)?;
    if wants_html(&headers) {
        let m = serde_json::from_str(&model).map_err(|e| ApiError(ServiceError::Internal(e.to_string())))?;
        return Ok(Html(render_page(&id, &m)).into_response());
    }
    Ok(json_text(model))
}

async fn log(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(plain(app.service.log_text(&id)?))
}

async fn obligations(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let list = app.service.obligations(&id)?;
    Ok(json_text(serde_json::to_string_pretty(&list).expect("list serializes")))
}

async fn prove(State(app): State<AppState>, Path((id, oid)): Path<(String, String)>, body: Bytes) -> ApiResult<Response> {
    let req: ProveRequest = optional_body(&body)?;
    let explanation = app.pooled(move |svc| svc.prove(&id, &oid, &req)).await?;
    let status = if explanation.status == "Error" {
        StatusCode::BAD_GATEWAY
    } else {
        StatusCode::OK
    };
    Ok((status, Json(explanation)).into_response())
}

async fn problem(State(app): State<AppState>, Path((id, oid)): Path<(String, String)>) -> ApiResult<Response> {
    Ok(plain(app.service.problem_text(&id, &oid)?))
}

#[derive(Default, Deserialize)]
struct HintsRequest {
    k: Option<usize>,
}

async fn hints(State(app): State<AppState>, Path((id, oid)): Path<(String, String)>, body: Bytes) -> ApiResult<Response> {
    let req: HintsRequest = optional_body(&body)?;
    Ok(Json(app.service.hints(&id, &oid, req.k)?).into_response())
}

async fn run_output(State(app): State<AppState>, Path((id, file)): Path<(String, String)>) -> ApiResult<Response> {
    Ok(plain(app.service.run_output(&id, &file)?))
}

#[derive(Default, Deserialize)]
struct InstallRequest {
    #[serde(default)]
    force: bool,
}

async fn install(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Response> {
    let req: InstallRequest = optional_body(&body)?;
    let doc = app.pooled(move |svc| svc.install(&id, req.force)).await?;
    Ok(Json(doc).into_response())
}

async fn library(State(app): State<AppState>) -> Response {
    json_text(serde_json::to_string_pretty(&app.service.library_list()).expect("list serializes"))
}

async fn library_item(State(app): State<AppState>, Path(name): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.service.library_item(&name)?).into_response())
}
