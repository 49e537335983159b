//! The `/v1` HTTP routes.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tower_http::cors::CorsLayer;

use crate::service::{self, Engine, ServiceError};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ServiceError::Unprocessable { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::NotFound { .. } => StatusCode::NOT_FOUND,
            ServiceError::Internal { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self.body())).into_response()
    }
}

fn body<T>(req: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    req.map(|Json(t)| t)
        .map_err(|e| ServiceError::bad("malformed_request", e.body_text()))
}

/// Runs a handler off the async workers; checks are CPU-bound.
async fn run<Req, Resp>(
    engine: Arc<Engine>,
    req: Result<Json<Req>, JsonRejection>,
    f: fn(&Engine, &Req) -> Result<Resp, ServiceError>,
) -> Result<Json<Resp>, ServiceError>
where
    Req: DeserializeOwned + Send + 'static,
    Resp: Serialize + Send + 'static,
{
    let req = body(req)?;
    tokio::task::spawn_blocking(move || f(&engine, &req))
        .await
        .map_err(|e| ServiceError::Internal {
            code: "internal",
            message: e.to_string(),
        })?
        .map(Json)
}

async fn parse(
    State(e): State<Arc<Engine>>,
    req: Result<Json<service::ParseRequest>, JsonRejection>,
) -> Result<Json<service::ParseResponse>, ServiceError> {
    run(e, req, |_, r| service::parse_formula(r)).await
}

async fn check_proof(
    State(e): State<Arc<Engine>>,
    req: Result<Json<service::CheckProofRequest>, JsonRejection>,
) -> Result<Json<service::CheckProofResponse>, ServiceError> {
    run(e, req, service::check_proof).await
}

async fn check_table(
    State(e): State<Arc<Engine>>,
    req: Result<Json<service::CheckTableRequest>, JsonRejection>,
) -> Result<Json<service::CheckTableResponse>, ServiceError> {
    run(e, req, service::check_table).await
}

async fn check_translation(
    State(e): State<Arc<Engine>>,
    req: Result<Json<service::CheckTranslationRequest>, JsonRejection>,
) -> Result<Json<service::CheckTranslationResponse>, ServiceError> {
    run(e, req, service::check_translation_request).await
}

async fn decompose(
    State(e): State<Arc<Engine>>,
    req: Result<Json<service::DecomposeRequest>, JsonRejection>,
) -> Result<Json<service::DecomposeResponse>, ServiceError> {
    run(e, req, service::decompose_formula).await
}

async fn systems(State(e): State<Arc<Engine>>) -> Json<service::SystemsResponse> {
    Json(service::systems(&e))
}

async fn assignments(State(e): State<Arc<Engine>>) -> Json<service::AssignmentsResponse> {
    Json(service::assignments(&e))
}

async fn assignment(
    State(e): State<Arc<Engine>>,
    Path(id): Path<String>,
) -> Result<Json<crate::assignments::AssignmentManifest>, ServiceError> {
    service::assignment(&e, &id).map(Json)
}

async fn fallback() -> ServiceError {
    ServiceError::NotFound {
        code: "no_route",
        message: "no such endpoint".into(),
    }
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/v1/parse", post(parse))
        .route("/v1/check/proof", post(check_proof))
        .route("/v1/check/table", post(check_table))
        .route("/v1/check/translation", post(check_translation))
        .route("/v1/decompose", post(decompose))
        .route("/v1/systems", get(systems))
        .route("/v1/assignments", get(assignments))
        .route("/v1/assignments/{id}", get(assignment))
        .fallback(fallback)
        .layer(CorsLayer::permissive())
        .with_state(engine)
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, engine: Arc<Engine>) -> std::io::Result<()> {
    axum::serve(listener, router(engine)).await
}
