//! HTTP facade over the contact pipeline.
//!
//! | method | path | |
//! |---|---|---|
//! | `POST` | `/sessions` | multipart `organ` + `tumor` STL, optional `unit_scale`, `weld_epsilon_mm` |
//! | `GET` | `/sessions/{id}` | mesh summaries and the last result |
//! | `DELETE` | `/sessions/{id}` | drop a session |
//! | `POST` | `/sessions/{id}/compute` | `{cap_mm?, threshold_override_mm?, refine?}`, `?include_distribution=1` |
//! | `GET` | `/sessions/{id}/mesh/{organ,tumor}` | indexed geometry, face order matching the result IDs |
//!
//! Sessions live in memory and expire after a period without access.

mod error;
mod handlers;
mod session;

use std::path::PathBuf;
use std::time::Duration;

use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;
use tower_http::trace::TraceLayer;

pub use error::ApiError;
pub use handlers::{ComputeParams, CreatedSession, MeshPayload, SessionInfo};
pub use session::{BoundingBox, MeshSummary, Session, SessionStore};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Limit on the whole upload request.
    pub max_upload_bytes: usize,
    /// Sessions untouched for this long are dropped.
    pub session_ttl: Duration,
    /// Directory served at `/`, typically the built viewer.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_upload_bytes: 256 * 1024 * 1024,
            session_ttl: Duration::from_secs(3600),
            static_dir: None,
        }
    }
}

/// Builds the router over `store`.
pub fn app(store: SessionStore, config: &ServiceConfig) -> Router {
    let api = Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route(
            "/sessions",
            post(handlers::create_session).layer(DefaultBodyLimit::max(config.max_upload_bytes)),
        )
        .route(
            "/sessions/{id}",
            get(handlers::session_info).delete(handlers::delete_session),
        )
        .route("/sessions/{id}/compute", post(handlers::compute))
        .route("/sessions/{id}/mesh/{role}", get(handlers::mesh))
        .with_state(store);
    let api = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    api.layer(CorsLayer::permissive()).layer(TraceLayer::new_for_http())
}

/// Serves until the listener fails, evicting idle sessions in the background.
pub async fn serve(listener: tokio::net::TcpListener, config: ServiceConfig) -> std::io::Result<()> {
    let store = SessionStore::default();
    let sweeper = store.clone();
    let ttl = config.session_ttl;
    tokio::spawn(async move {
        let mut tick = tokio::time::interval((ttl / 4).clamp(Duration::from_secs(1), Duration::from_secs(60)));
        loop {
            tick.tick().await;
            let n = sweeper.evict_idle(ttl);
            if n > 0 {
                tracing::info!(evicted = n, "expired sessions");
            }
        }
    });
    axum::serve(listener, app(store, &config)).await
}
