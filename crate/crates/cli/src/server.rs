//! Read-only HTTP JSON service over a dataset loaded at start-up.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

use crate::analysis::{analyze, players_json, AnalysisRequest, Dataset};
use crate::json::render;

pub const BIND_ENV: &str = "CRICKET_RULES_BIND";
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

fn json_response(status: StatusCode, body: &Value) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], render(body)).into_response()
}

async fn health(State(ds): State<Arc<Dataset>>) -> Response {
    json_response(
        StatusCode::OK,
        &json!({ "status": "ok", "records": ds.corpus.len(), "corpus_digest": ds.corpus_digest }),
    )
}

async fn players(State(ds): State<Arc<Dataset>>) -> Response {
    json_response(StatusCode::OK, &players_json(&ds))
}

async fn analysis(State(ds): State<Arc<Dataset>>, Query(q): Query<BTreeMap<String, String>>) -> Response {
    let result = AnalysisRequest::from_query(&q).and_then(|req| analyze(&ds, &req));
    match result {
        Ok(body) => json_response(StatusCode::OK, &body),
        Err(e) => {
            let status = StatusCode::from_u16(e.http_status()).unwrap_or(StatusCode::UNPROCESSABLE_ENTITY);
            json_response(status, &e.to_json())
        }
    }
}

async fn not_found() -> Response {
    json_response(
        StatusCode::NOT_FOUND,
        &json!({ "error": { "code": "NOT_FOUND", "message": "no such endpoint" } }),
    )
}

pub fn router(ds: Arc<Dataset>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/players", get(players))
        .route("/analysis", get(analysis))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(ds)
}

pub async fn serve(ds: Arc<Dataset>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(ds)).await
}
