//! HTTP API holding scenes in memory and rendering them on request.
//!
//! - `GET /health` answers `ok`.
//! - `POST /scenes` takes a multipart form with `cutout` (PNG), `height`
//!   (PHM) and optional `receiver` (PHM) and `background` (PNG) parts and
//!   answers `201 {"scene_id": ...}`.
//! - `POST /scenes/{id}/render` takes a JSON [`RenderParams`] body and
//!   answers with `image/png`.
//! - `DELETE /scenes/{id}` drops a scene.
//!
//! Renders on one scene run one at a time; different scenes render
//! concurrently. Scenes idle for longer than the TTL are evicted.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Multipart, Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::pipeline::{render_png, PipelineError, RenderParams, Scene};

pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);
const MAX_UPLOAD: usize = 256 << 20;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub ttl: Duration,
    /// Origin allowed by CORS; any origin when unset.
    pub allowed_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            ttl: DEFAULT_TTL,
            allowed_origin: None,
        }
    }
}

struct Session {
    scene: Scene,
    last_params: Option<RenderParams>,
}

struct Entry {
    session: Arc<tokio::sync::Mutex<Session>>,
    last_used: Instant,
}

/// Scene table shared by all handlers.
pub struct AppState {
    scenes: Mutex<HashMap<String, Entry>>,
    ttl: Duration,
}

impl AppState {
    pub fn new(ttl: Duration) -> Arc<Self> {
        Arc::new(Self {
            scenes: Mutex::new(HashMap::new()),
            ttl,
        })
    }

    pub fn insert(&self, scene: Scene) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let entry = Entry {
            session: Arc::new(tokio::sync::Mutex::new(Session {
                scene,
                last_params: None,
            })),
            last_used: Instant::now(),
        };
        self.scenes.lock().unwrap().insert(id.clone(), entry);
        id
    }

    fn touch(&self, id: &str) -> Option<Arc<tokio::sync::Mutex<Session>>> {
        let mut scenes = self.scenes.lock().unwrap();
        let entry = scenes.get_mut(id)?;
        entry.last_used = Instant::now();
        Some(entry.session.clone())
    }

    pub fn remove(&self, id: &str) -> bool {
        self.scenes.lock().unwrap().remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.scenes.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops scenes idle since before `now - ttl`; returns how many.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let mut scenes = self.scenes.lock().unwrap();
        let before = scenes.len();
        scenes.retain(|_, e| now.saturating_duration_since(e.last_used) <= self.ttl);
        before - scenes.len()
    }
}

fn error(status: StatusCode, msg: impl std::fmt::Display) -> Response {
    (status, Json(json!({ "error": msg.to_string() }))).into_response()
}

async fn health() -> &'static str {
    "ok"
}

async fn create_scene(State(state): State<Arc<AppState>>, mut form: Multipart) -> Response {
    state.evict_idle(Instant::now());
    let mut parts: HashMap<String, Bytes> = HashMap::new();
    loop {
        let field = match form.next_field().await {
            Ok(Some(f)) => f,
            Ok(None) => break,
            Err(e) => return error(StatusCode::BAD_REQUEST, e),
        };
        let name = field.name().unwrap_or_default().to_owned();
        if !matches!(name.as_str(), "cutout" | "height" | "receiver" | "background") {
            return error(StatusCode::BAD_REQUEST, format!("unexpected part `{name}`"));
        }
        match field.bytes().await {
            Ok(b) => {
                parts.insert(name, b);
            }
            Err(e) => return error(StatusCode::BAD_REQUEST, e),
        }
    }
    if !(parts.contains_key("cutout") && parts.contains_key("height")) {
        return error(StatusCode::BAD_REQUEST, "both `cutout` and `height` parts are required");
    }
    let decoded = tokio::task::spawn_blocking(move || {
        Scene::from_bytes(
            &parts["cutout"],
            &parts["height"],
            parts.get("receiver").map(|b| &b[..]),
            parts.get("background").map(|b| &b[..]),
        )
    });
    match decoded.await {
        Ok(Ok(scene)) => {
            let id = state.insert(scene);
            (StatusCode::CREATED, Json(json!({ "scene_id": id }))).into_response()
        }
        Ok(Err(e)) => error(StatusCode::BAD_REQUEST, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

async fn render(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Response {
    let Some(session) = state.touch(&id) else {
        return error(StatusCode::NOT_FOUND, format!("unknown scene `{id}`"));
    };
    let params: RenderParams = match serde_json::from_slice(&body) {
        Ok(p) => p,
        Err(e) if e.is_data() => return error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    if let Err(e) = params.validate() {
        return error(StatusCode::UNPROCESSABLE_ENTITY, e);
    }

    let guard = session.lock_owned().await;
    let rendered = tokio::task::spawn_blocking(move || {
        let mut guard = guard;
        let out = render_png(&guard.scene, &params);
        guard.last_params = Some(params);
        out
    })
    .await;
    match rendered {
        Ok(Ok(png)) => ([(header::CONTENT_TYPE, "image/png")], png).into_response(),
        Ok(Err(PipelineError::Invalid(e))) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

async fn delete_scene(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    if state.remove(&id) {
        StatusCode::NO_CONTENT.into_response()
    } else {
        error(StatusCode::NOT_FOUND, format!("unknown scene `{id}`"))
    }
}

pub fn router(state: Arc<AppState>, cfg: &ServiceConfig) -> Router {
    let origin = match cfg.allowed_origin.as_deref().map(HeaderValue::from_str) {
        Some(Ok(v)) => AllowOrigin::exact(v),
        _ => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([
            axum::http::Method::GET,
            axum::http::Method::POST,
            axum::http::Method::DELETE,
        ])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/health", get(health))
        .route("/scenes", post(create_scene))
        .route("/scenes/{id}/render", post(render))
        .route("/scenes/{id}", axum::routing::delete(delete_scene))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD))
        .layer(cors)
        .with_state(state)
}

/// Serves the API on `addr` until the process exits.
pub async fn serve(addr: SocketAddr, cfg: ServiceConfig) -> std::io::Result<()> {
    let state = AppState::new(cfg.ttl);
    let sweeper = state.clone();
    let period = (cfg.ttl / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let n = sweeper.evict_idle(Instant::now());
            if n > 0 {
                log::info!("evicted {n} idle scene(s)");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, &cfg)).await
}
