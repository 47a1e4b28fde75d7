use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use pyreline_core::engine::EngineError;
use pyreline_core::graph::GraphError;
use serde_json::{json, Value};

/// An API failure rendered as `{code, message, detail}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>, detail: Value) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            detail,
        }
    }

    pub fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message, Value::Null)
    }

    pub fn unknown_game(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "UnknownGame",
            format!("no game with id `{id}`"),
            json!({ "id": id }),
        )
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message, Value::Null)
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        use EngineError::*;
        let message = e.to_string();
        let (status, code, detail) = match &e {
            WrongCount { expected, got } => (
                StatusCode::BAD_REQUEST,
                "WrongCount",
                json!({ "field": "count", "expected": expected, "got": got }),
            ),
            ResultDisconnected { vertex } => (
                StatusCode::BAD_REQUEST,
                "ResultDisconnected",
                json!({ "field": "edges", "vertex": vertex }),
            ),
            Graph(g) => (StatusCode::BAD_REQUEST, "InvalidEdges", graph_detail(g)),
            StrategyReturnedBurnedVertex(v) => (
                StatusCode::CONFLICT,
                "StrategyReturnedBurnedVertex",
                json!({ "field": "vertex", "vertex": v }),
            ),
            StrategyReturnedUnknownVertex(v) => (
                StatusCode::BAD_REQUEST,
                "StrategyReturnedUnknownVertex",
                json!({ "field": "vertex", "vertex": v }),
            ),
            IllegalPass { unburned } => (
                StatusCode::BAD_REQUEST,
                "IllegalPass",
                json!({ "field": "vertex", "unburned": unburned }),
            ),
            Schedule(_) => (StatusCode::BAD_REQUEST, "BadSchedule", Value::Null),
            HumanMoveRequired(role) => (
                StatusCode::CONFLICT,
                "HumanMoveRequired",
                json!({ "awaiting": role }),
            ),
            NotYourTurn { awaiting, got } => (
                StatusCode::CONFLICT,
                "NotYourTurn",
                json!({ "awaiting": awaiting, "got": got }),
            ),
        };
        ApiError::new(status, code, message, detail)
    }
}

fn graph_detail(e: &GraphError) -> Value {
    use GraphError::*;
    match *e {
        EdgeBetweenOldVertices(a, b) | DuplicateEdge(a, b) | UnknownEndpoint(a, b) => {
            json!({ "field": "edges", "edge": [a, b] })
        }
        SelfLoop(v) | UnknownVertex(v) => json!({ "field": "edges", "vertex": v }),
        TurnNotIncreasing { .. } | CapacityExceeded => json!({ "field": "edges" }),
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({
            "code": self.code,
            "message": self.message,
            "detail": self.detail,
        });
        (self.status, Json(body)).into_response()
    }
}
