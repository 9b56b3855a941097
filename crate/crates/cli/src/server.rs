//! JSON-over-HTTP play server. One game session per process; every handler
//! takes the session lock, so requests are applied one at a time.

use std::sync::Arc;

use arck_core::arck::{
    apply_move, decode_position, encode_position, legal_moves, solve, solve_with, ArcKError, ArcKPosition,
    SolverConfig,
};
use arck_core::graph::EdgeId;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Mutex;

/// Node budget for `/hint`. Past it the hint falls back to the first legal
/// move and says so.
pub const HINT_BUDGET: u64 = 5_000_000;

#[derive(Default)]
pub struct Session {
    pub position: Option<ArcKPosition>,
}

type Shared = Arc<Mutex<Session>>;

pub fn router(position: Option<ArcKPosition>) -> Router {
    let state: Shared = Arc::new(Mutex::new(Session { position }));
    Router::new()
        .route("/position", get(get_position))
        .route("/move", post(post_move))
        .route("/new", post(post_new))
        .route("/hint", get(get_hint))
        .route("/legal", get(get_legal))
        .with_state(state)
}

struct ApiError(StatusCode, Value);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

fn no_position() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, json!({ "error": "no position loaded" }))
}

fn game_over() -> ApiError {
    ApiError(StatusCode::CONFLICT, json!({ "error": "game over" }))
}

/// The position document with `terminal` and `winner` added. The winner of
/// a finished game comes from the solver, which sees a position with no
/// moves for the mover.
pub fn state_json(pos: &ArcKPosition) -> Value {
    let mut v: Value = serde_json::from_str(&encode_position(pos)).expect("position JSON");
    let terminal = legal_moves(pos).is_empty();
    let winner = if terminal { Some(solve(pos).expect("terminal positions solve").winner) } else { None };
    v["terminal"] = json!(terminal);
    v["winner"] = json!(winner);
    v
}

async fn get_position(State(s): State<Shared>) -> Result<Json<Value>, ApiError> {
    let s = s.lock().await;
    let pos = s.position.as_ref().ok_or_else(no_position)?;
    Ok(Json(state_json(pos)))
}

#[derive(Deserialize)]
struct MoveRequest {
    edge: EdgeId,
}

async fn post_move(State(s): State<Shared>, Json(req): Json<MoveRequest>) -> Result<Json<Value>, ApiError> {
    let mut s = s.lock().await;
    let pos = s.position.as_ref().ok_or_else(no_position)?;
    if legal_moves(pos).is_empty() {
        return Err(game_over());
    }
    let next = apply_move(pos, req.edge).map_err(|e| match e {
        ArcKError::IllegalMove { edge, reason } => ApiError(
            StatusCode::BAD_REQUEST,
            json!({ "error": "illegal move", "edge": edge, "reason": reason }),
        ),
        other => ApiError(StatusCode::BAD_REQUEST, json!({ "error": other.to_string() })),
    })?;
    let body = state_json(&next);
    s.position = Some(next);
    Ok(Json(body))
}

#[derive(Deserialize)]
struct NewRequest {
    position: Value,
}

async fn post_new(State(s): State<Shared>, Json(req): Json<NewRequest>) -> Result<Json<Value>, ApiError> {
    let pos = decode_position(&req.position.to_string())
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, json!({ "error": e.to_string() })))?;
    let body = state_json(&pos);
    s.lock().await.position = Some(pos);
    Ok(Json(body))
}

async fn get_hint(State(s): State<Shared>) -> Result<Json<Value>, ApiError> {
    let s = s.lock().await;
    let pos = s.position.clone().ok_or_else(no_position)?;
    let legal = legal_moves(&pos);
    if legal.is_empty() {
        return Err(game_over());
    }
    let config = SolverConfig { node_budget: HINT_BUDGET, parallel: true };
    let solved = tokio::task::spawn_blocking(move || solve_with(&pos, &config)).await.expect("solver task");
    let body = match solved {
        Ok(r) => json!({ "edge": r.principal_move, "exact": true, "winner": r.winner }),
        Err(ArcKError::BudgetExceeded(_)) => json!({ "edge": legal[0], "exact": false, "winner": null }),
        Err(e) => return Err(ApiError(StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": e.to_string() }))),
    };
    Ok(Json(body))
}

async fn get_legal(State(s): State<Shared>) -> Result<Json<Value>, ApiError> {
    let s = s.lock().await;
    let pos = s.position.as_ref().ok_or_else(no_position)?;
    Ok(Json(json!({ "edges": legal_moves(pos) })))
}
