//! HTTP JSON API.
//!
//! | method | path                       | body                     |
//! |--------|----------------------------|--------------------------|
//! | POST   | `/api/session`             | `{source, rules?}`       |
//! | POST   | `/api/session/{id}/step`   | `{steps?}` (default 1)   |
//! | POST   | `/api/session/{id}/back`   |                          |
//! | POST   | `/api/session/{id}/reset`  | `{rules?}`               |
//! | GET    | `/api/session/{id}`        |                          |
//! | GET    | `/api/rulesets`            |                          |

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use mkstep_core::rules::RULESET_NAMES;
use mkstep_core::Diagnostic;
use serde::Deserialize;
use serde_json::json;

use crate::session::SessionError;
use crate::store::{lock, SessionStore};

/// Upper bound on `steps` in one request, so a diverging program cannot pin
/// a worker.
pub const MAX_STEPS_PER_REQUEST: usize = 10_000;

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}", get(current))
        .route("/api/session/{id}/step", post(step))
        .route("/api/session/{id}/back", post(back))
        .route("/api/session/{id}/reset", post(reset))
        .route("/api/rulesets", get(rulesets))
        .with_state(store)
}

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, msg: impl Into<String>) -> Response {
    json_body(status, json!({ "error": msg.into() }).to_string())
}

pub fn diagnostics_json(diags: &[Diagnostic]) -> String {
    json!({ "diagnostics": diags }).to_string()
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        match self {
            SessionError::Diagnostics(d) => {
                json_body(StatusCode::UNPROCESSABLE_ENTITY, diagnostics_json(&d))
            }
            SessionError::UnknownRules(_) => error(StatusCode::BAD_REQUEST, self.to_string()),
            SessionError::Engine(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        }
    }
}

/// Parses an optional JSON body; an empty body means all defaults.
#[allow(clippy::result_large_err)]
fn parse<T: for<'de> Deserialize<'de> + Default>(body: &Bytes) -> Result<T, Response> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| error(StatusCode::BAD_REQUEST, e.to_string()))
}

#[derive(Deserialize)]
struct CreateReq {
    source: String,
    #[serde(default = "default_rules")]
    rules: String,
}

fn default_rules() -> String {
    "interleaving".into()
}

async fn create(State(store): State<Arc<SessionStore>>, body: Bytes) -> Response {
    let req: CreateReq = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    match store.create(&req.source, &req.rules) {
        Ok(s) => {
            let s = lock(&s);
            let id = serde_json::to_string(&s.id).expect("string");
            json_body(
                StatusCode::OK,
                format!("{{\"id\":{id},\"snapshot\":{}}}", s.json()),
            )
        }
        Err(e) => e.into_response(),
    }
}

fn with_session(
    store: &SessionStore,
    id: &str,
    f: impl FnOnce(&mut crate::session::Session) -> Result<(), SessionError>,
) -> Response {
    let Some(s) = store.get(id) else {
        return error(StatusCode::NOT_FOUND, format!("no session `{id}`"));
    };
    let mut s = lock(&s);
    match f(&mut s) {
        Ok(()) => json_body(StatusCode::OK, s.json().to_string()),
        Err(e) => e.into_response(),
    }
}

async fn current(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Response {
    with_session(&store, &id, |_| Ok(()))
}

#[derive(Deserialize, Default)]
struct StepReq {
    steps: Option<usize>,
}

async fn step(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Response {
    let req: StepReq = match parse(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    let n = req.steps.unwrap_or(1).min(MAX_STEPS_PER_REQUEST);
    with_session(&store, &id, |s| s.step_many(n).map(|_| ()))
}

async fn back(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Response {
    with_session(&store, &id, |s| {
        s.step_back();
        Ok(())
    })
}

#[derive(Deserialize, Default)]
struct ResetReq {
    rules: Option<String>,
}

async fn reset(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Response {
    let req: ResetReq = match parse(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    with_session(&store, &id, |s| s.reset(req.rules.as_deref()).map(|_| ()))
}

async fn rulesets() -> Response {
    json_body(StatusCode::OK, serde_json::to_string(RULESET_NAMES).expect("strings"))
}
