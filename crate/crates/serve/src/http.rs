use std::future::Future;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use percent_encoding::{utf8_percent_encode, NON_ALPHANUMERIC};
use tokio::net::TcpListener;

use crate::config::ConfigError;
use crate::gateway::{Gateway, SynthError, SynthesisRequest};

const BUILTIN_PAGE: &str = include_str!("../static/index.html");

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

pub fn router(gateway: Arc<Gateway>) -> Router {
    Router::new()
        .route("/v1/synthesize", post(synthesize))
        .route("/synthesize", post(synthesize))
        .route("/health", get(health))
        .route("/config", get(config))
        .route("/metrics", get(metrics))
        .route("/", get(index))
        .route("/assets/{name}", get(asset))
        .with_state(gateway)
}

fn error_response(status: StatusCode, kind: &str, message: String) -> Response {
    (status, Json(serde_json::json!({ "error": message, "kind": kind }))).into_response()
}

fn header_value(s: &str) -> HeaderValue {
    HeaderValue::from_str(s).unwrap_or_else(|_| HeaderValue::from_static("invalid"))
}

async fn synthesize(State(gw): State<Arc<Gateway>>, body: Bytes) -> Response {
    let req: SynthesisRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => {
            gw.metrics().count_rejected();
            return error_response(StatusCode::BAD_REQUEST, "invalid_request", format!("malformed JSON: {e}"));
        }
    };
    let worker = Arc::clone(&gw);
    let result = tokio::task::spawn_blocking(move || worker.synthesize(&req)).await;
    let out = match result {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => {
            let status = match e {
                SynthError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
                SynthError::BackendUnavailable(_) | SynthError::BadBackendAudio(_) => StatusCode::BAD_GATEWAY,
                SynthError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            };
            return error_response(status, e.kind(), e.to_string());
        }
        Err(join) => return error_response(StatusCode::INTERNAL_SERVER_ERROR, "internal", join.to_string()),
    };

    let mut response = out.wav.into_response();
    let h = response.headers_mut();
    h.insert(header::CONTENT_TYPE, HeaderValue::from_static("audio/wav"));
    // Header values are ASCII; the Arabic text travels percent-encoded.
    h.insert(
        "x-vowelized-text",
        header_value(&utf8_percent_encode(&out.vowelized_text, NON_ALPHANUMERIC).to_string()),
    );
    h.insert("x-vowelized", header_value(if out.vowelized { "true" } else { "false" }));
    h.insert("x-vowelizer-status", header_value(&out.vowelizer_status));
    h.insert("x-backend", header_value(out.backend.as_str()));
    h.insert(
        "x-snr-db",
        header_value(&out.snr_db.map_or_else(|| "none".to_string(), |s| format!("{s}"))),
    );
    h.insert("x-duration-s", header_value(&format!("{:.3}", out.duration_s)));
    response
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn config(State(gw): State<Arc<Gateway>>) -> Response {
    Json(gw.config().redacted()).into_response()
}

async fn metrics(State(gw): State<Arc<Gateway>>) -> Response {
    Json(gw.metrics().snapshot()).into_response()
}

async fn index(State(gw): State<Arc<Gateway>>) -> Response {
    if let Some(dir) = &gw.config().webui_dir {
        match tokio::fs::read_to_string(dir.join("index.html")).await {
            Ok(page) => return Html(page).into_response(),
            Err(e) => tracing::warn!(dir = %dir.display(), error = %e, "web client missing, serving built-in page"),
        }
    }
    Html(BUILTIN_PAGE).into_response()
}

/// Flat files next to the web client's `index.html`.
async fn asset(State(gw): State<Arc<Gateway>>, UrlPath(name): UrlPath<String>) -> Response {
    let safe = !name.is_empty() && !name.starts_with('.') && name.chars().all(|c| c.is_ascii_alphanumeric() || "._-".contains(c));
    let Some(dir) = gw.config().webui_dir.as_ref().filter(|_| safe) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    match tokio::fs::read(dir.join(&name)).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, content_type(Path::new(&name)))], bytes).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("html") => "text/html; charset=utf-8",
        Some("json" | "map") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("wav") => "audio/wav",
        _ => "application/octet-stream",
    }
}

/// Serves on an already bound listener until `shutdown` resolves, then
/// drains in-flight requests.
pub async fn serve_on(
    listener: TcpListener,
    gateway: Arc<Gateway>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(gateway)).with_graceful_shutdown(shutdown).await
}

/// Binds `cfg.host:cfg.port` and serves until Ctrl-C or SIGTERM.
pub async fn run(gateway: Arc<Gateway>) -> Result<(), ServeError> {
    let addr = gateway.config().addr()?;
    let listener = TcpListener::bind(addr).await.map_err(|source| ServeError::Bind {
        addr: addr.to_string(),
        source,
    })?;
    tracing::info!(%addr, backend = gateway.config().backend.kind.as_str(), "gateway listening");
    serve_on(listener, gateway, shutdown_signal()).await?;
    tracing::info!("gateway stopped");
    Ok(())
}

pub async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}
