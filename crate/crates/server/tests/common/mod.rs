#![allow(dead_code)]

use std::path::Path;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use proofdesk_core::advisor::harvest;
use proofdesk_core::article::parse_article;
use proofdesk_core::problem::{functor_type_axioms, generate_problem, LibraryStore};
use proofdesk_core::verifier::{collect_obligations, verify_article};
use proofdesk_server::http::{router, AppState};
use proofdesk_server::service::{Config, Service};

pub struct TestService {
    pub dir: tempfile::TempDir,
    pub state: AppState,
    pub router: Router,
}

impl TestService {
    /// Must run inside a tokio runtime.
    pub fn start(configure: impl FnOnce(Config) -> Config) -> Self {
        let dir = tempfile::tempdir().unwrap();
        Self::open(dir, configure)
    }

    pub fn open(dir: tempfile::TempDir, configure: impl FnOnce(Config) -> Config) -> Self {
        let config = configure(Config::new(dir.path()));
        let (service, pending) = Service::open(config).unwrap();
        let state = AppState::new(service);
        for job in pending {
            state.spawn_rest(job, true);
        }
        let router = router(state.clone());
        TestService { dir, state, router }
    }

    pub async fn request(&self, method: &str, uri: &str, content_type: Option<&str>, body: Vec<u8>) -> (StatusCode, String) {
        let mut b = Request::builder().method(method).uri(uri);
        if let Some(ct) = content_type {
            b = b.header("content-type", ct);
        }
        let resp = self.router.clone().oneshot(b.body(Body::from(body)).unwrap()).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        (status, String::from_utf8(bytes.to_vec()).unwrap())
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, String) {
        self.request("GET", uri, None, Vec::new()).await
    }

    pub async fn get_html(&self, uri: &str) -> (StatusCode, String) {
        let req = Request::builder().uri(uri).header("accept", "text/html").body(Body::empty()).unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        (status, String::from_utf8(bytes.to_vec()).unwrap())
    }

    pub async fn post_json(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        let (s, text) = self
            .request("POST", uri, Some("application/json"), serde_json::to_vec(&body).unwrap())
            .await;
        (s, serde_json::from_str(&text).unwrap_or(Value::String(text)))
    }

    pub async fn get_json(&self, uri: &str) -> (StatusCode, Value) {
        let (s, text) = self.get(uri).await;
        (s, serde_json::from_str(&text).unwrap_or(Value::String(text)))
    }

    pub async fn submit(&self, text: &str) -> String {
        let (s, v) = self.post_json("/articles", serde_json::json!({ "text": text })).await;
        assert_eq!(s, StatusCode::CREATED, "{v}");
        v["id"].as_str().unwrap().to_string()
    }

    /// Polls until the job is Ready or Failed.
    pub async fn wait_settled(&self, id: &str, timeout: Duration) -> Value {
        let start = Instant::now();
        loop {
            let (_, v) = self.get_json(&format!("/articles/{id}")).await;
            let state = v["state"].as_str().unwrap_or_default().to_string();
            if state == "ready" || state == "failed" || start.elapsed() > timeout {
                return v;
            }
            tokio::time::sleep(Duration::from_millis(20)).await;
        }
    }
}

/// Training examples harvested offline from `text` into
/// `<workdir>/training/fixture.json`.
pub fn write_fixture_training(workdir: &Path, texts: &[&str]) {
    let mut examples = Vec::new();
    for text in texts {
        let a = parse_article(text).unwrap();
        let lib = LibraryStore::new();
        let report = verify_article(&a, &lib, 1);
        let (obs, _) = collect_obligations(&a, &lib);
        let problems: Vec<_> = obs
            .iter()
            .filter_map(|o| generate_problem(o, &lib, &functor_type_axioms(&a)).ok())
            .collect();
        examples.extend(harvest(&report, &obs, &problems, &[]));
    }
    let dir = workdir.join("training");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("fixture.json"), serde_json::to_string(&examples).unwrap()).unwrap();
}

/// Timestamp of the first log line containing `needle`.
pub fn log_time<'a>(log: &'a str, needle: &str) -> Option<&'a str> {
    log.lines()
        .find(|l| l.contains(needle))
        .and_then(|l| l.split_whitespace().next())
}
