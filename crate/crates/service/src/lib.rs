//! Stateless HTTP front end.
//!
//! | method | path              | body                                    |
//! |--------|-------------------|-----------------------------------------|
//! | POST   | `/api/v1/rank`    | problem document + `options`            |
//! | POST   | `/api/v1/sweep`   | problem document + `criterion`, `steps` |
//! | GET    | `/api/v1/health`  | none                                    |
//!
//! Every 4xx body has the shape `{error, violations: [{code, path, message}]}`.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use idealrank_core::analysis::weight_sweep;
use idealrank_core::ingestion::ProblemDocument;
use idealrank_core::{
    evaluate, EvalOptions, IdealSolutions, NormalizedMatrix, RankingReport, SeparationMeasures,
    TopsisError, Violation, ViolationCode, WeightedMatrix, ENGINE_VERSION,
};

#[derive(Debug, Clone, Deserialize)]
pub struct RankRequest {
    #[serde(flatten)]
    pub problem: ProblemDocument,
    #[serde(default)]
    pub options: EvalOptions,
    #[serde(default)]
    pub include_intermediates: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepRequest {
    #[serde(flatten)]
    pub problem: ProblemDocument,
    pub criterion: String,
    pub steps: usize,
    #[serde(default)]
    pub options: EvalOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intermediates {
    pub normalized: NormalizedMatrix,
    pub weighted: WeightedMatrix,
    pub ideals: IdealSolutions,
    pub separations: SeparationMeasures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResponse {
    pub alternatives: Vec<String>,
    pub closeness: Vec<f64>,
    pub ranks: Vec<usize>,
    /// Alternative names from best to worst.
    pub ranking: Vec<String>,
    pub options: EvalOptions,
    pub weights_rescaled: bool,
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intermediates: Option<Intermediates>,
}

impl RankResponse {
    pub fn from_report(report: RankingReport, include_intermediates: bool) -> Self {
        let ranking = report
            .ranked_names()
            .into_iter()
            .map(str::to_owned)
            .collect();
        let intermediates = include_intermediates.then_some(Intermediates {
            normalized: report.normalized,
            weighted: report.weighted,
            ideals: report.ideals,
            separations: report.separations,
        });
        RankResponse {
            alternatives: report.alternatives,
            closeness: report.closeness,
            ranks: report.ranks,
            ranking,
            options: report.options,
            weights_rescaled: report.weights_rescaled,
            engine_version: ENGINE_VERSION.to_owned(),
            intermediates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

/// An error response: status plus the violation list.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn bad_request(error: &str, violations: Vec<Violation>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: error.to_owned(),
                violations,
            },
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let code = match e.classify() {
            Category::Data => ViolationCode::SchemaError,
            _ => ViolationCode::SyntaxError,
        };
        let path = format!("line {}, column {}", e.line(), e.column());
        ApiError::bad_request(
            "malformed request body",
            vec![Violation::new(code, path, e.to_string())],
        )
    }
}

impl From<TopsisError> for ApiError {
    fn from(e: TopsisError) -> Self {
        let status = if e.is_degenerate() {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::BAD_REQUEST
        };
        let error = match &e {
            TopsisError::Invalid(_) => "invalid problem".to_owned(),
            other => other.to_string(),
        };
        ApiError {
            status,
            body: ErrorBody {
                error,
                violations: e.violations(),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn decode<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(ApiError::from_json)
}

fn into_problem(doc: ProblemDocument) -> Result<idealrank_core::DecisionProblem, ApiError> {
    doc.into_problem()
        .map_err(|e| ApiError::bad_request("malformed problem document", vec![e.violation()]))
}

pub fn handle_rank(body: &[u8]) -> Result<RankResponse, ApiError> {
    let req: RankRequest = decode(body)?;
    let problem = into_problem(req.problem)?;
    let report = evaluate(&problem, &req.options)?;
    Ok(RankResponse::from_report(report, req.include_intermediates))
}

pub fn handle_sweep(body: &[u8]) -> Result<idealrank_core::analysis::SweepResult, ApiError> {
    let req: SweepRequest = decode(body)?;
    let problem = into_problem(req.problem)?;
    Ok(weight_sweep(
        &problem,
        &req.criterion,
        req.steps,
        &req.options,
    )?)
}

pub fn handle_health() -> Health {
    Health {
        status: "ok".to_owned(),
        version: ENGINE_VERSION.to_owned(),
    }
}

async fn rank(body: Bytes) -> Result<Json<RankResponse>, ApiError> {
    handle_rank(&body).map(Json)
}

async fn sweep(body: Bytes) -> Result<Json<idealrank_core::analysis::SweepResult>, ApiError> {
    // Sweeps can be long; keep them off the reactor threads.
    let result = tokio::task::spawn_blocking(move || handle_sweep(&body))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody {
                error: format!("sweep task failed: {e}"),
                violations: Vec::new(),
            },
        })?;
    result.map(Json)
}

async fn health() -> Json<Health> {
    Json(handle_health())
}

pub fn router() -> Router {
    Router::new()
        .route("/api/v1/rank", post(rank))
        .route("/api/v1/sweep", post(sweep))
        .route("/api/v1/health", get(health))
        .layer(CorsLayer::permissive())
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}
