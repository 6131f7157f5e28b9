//! Session-based HTTP API.
//!
//! | method | path | body / query | response |
//! |---|---|---|---|
//! | POST | `/sessions` | `{csv, axes, id_column?, attributes?, required?}` | `201 {session_id, rows, dropped, axes, attributes}` |
//! | DELETE | `/sessions/{id}` | | `204` |
//! | POST | `/sessions/{id}/graphs` | `{epsilon, seed?}` | graph JSON |
//! | GET | `/sessions/{id}/sweep` | `?epsilons=1,2,5&seed=0` | sweep rows |
//! | POST | `/sessions/{id}/colorings` | tagged by `type` | coloring JSON |
//! | POST | `/sessions/{id}/comparisons` | `{graph, group_a, group_b}` | comparison JSON |
//! | GET | `/sessions/{id}/layout` | `?graph=eps:seed&layout_seed=` | `{ball_id: [x, y]}` |
//!
//! Errors are `{"error": {"code", "message"}}` with status 400 (malformed
//! request), 404 (unknown session or ball), 413 (body too large) or 422
//! (rejected by the pipeline).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use ballmapper_core::analysis::{compare_groups, distance_coloring, radius_sweep, subgroup_fraction, ZeroScale};
use ballmapper_core::mapper::{build_graph, build_net, color_by, layout, Aggregator, BallMapperGraph};
use ballmapper_core::pointcloud::{axis_stats, AxisStats, PointCloud};
use ballmapper_core::regression::{ols_fit, residual_threshold_fractions};
use ballmapper_core::Error;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::{OnceCell, RwLock};
use tower_http::cors::{Any, CorsLayer};
use uuid::Uuid;

use crate::error::{AppError, AppResult};
use crate::io::{load_cloud, LoadSpec};
use crate::json::{self, to_canonical_string};

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub idle_timeout: Duration,
    pub max_rows: usize,
    /// Request body cap in bytes.
    pub body_limit: usize,
    /// CORS origin; `None` allows any.
    pub allowed_origin: Option<String>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            idle_timeout: Duration::from_secs(30 * 60),
            max_rows: 100_000,
            body_limit: 64 * 1024 * 1024,
            allowed_origin: None,
        }
    }
}

type GraphKey = (u64, u64);

struct BuiltGraph {
    graph: BallMapperGraph,
    json: String,
}

struct Session {
    cloud: Arc<PointCloud>,
    stats: Arc<Vec<AxisStats>>,
    graphs: Mutex<HashMap<GraphKey, Arc<OnceCell<Arc<BuiltGraph>>>>>,
    last_seen: Mutex<Instant>,
}

struct AppState {
    config: ServerConfig,
    sessions: RwLock<HashMap<Uuid, Arc<Session>>>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError { status, code: code.into(), message: message.into() }
    }

    fn malformed(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "malformed_request", message)
    }
}

impl From<AppError> for ApiError {
    fn from(e: AppError) -> Self {
        let status = match &e {
            AppError::Domain(Error::UnknownBall(_)) => StatusCode::NOT_FOUND,
            AppError::Csv(_) | AppError::Format(_) | AppError::Json(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        AppError::from(e).into()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            return ApiError::new(StatusCode::PAYLOAD_TOO_LARGE, "payload_too_large", e.body_text());
        }
        ApiError::malformed(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::malformed(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": { "code": self.code, "message": self.message } }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn json_text(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], body).into_response()
}

fn canonical(value: &Value) -> Response {
    json_text(StatusCode::OK, to_canonical_string(value))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> AppResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(ApiError::from)
}

/// The router, with CORS and body limit applied.
pub fn router(config: ServerConfig) -> Router {
    let cors = match &config.allowed_origin {
        Some(origin) => match origin.parse::<HeaderValue>() {
            Ok(v) => CorsLayer::new().allow_origin(v),
            Err(_) => CorsLayer::new(),
        },
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);
    let limit = config.body_limit;
    let state = Arc::new(AppState { config, sessions: RwLock::new(HashMap::new()) });
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", delete(delete_session))
        .route("/sessions/{id}/graphs", post(post_graph))
        .route("/sessions/{id}/sweep", get(get_sweep))
        .route("/sessions/{id}/colorings", post(post_coloring))
        .route("/sessions/{id}/comparisons", post(post_comparison))
        .route("/sessions/{id}/layout", get(get_layout))
        .layer(DefaultBodyLimit::max(limit))
        .layer(cors)
        .with_state(state)
}

/// Bind `addr` and serve until the process ends. Idle sessions are swept
/// in the background.
pub async fn serve(addr: &str, config: ServerConfig) -> AppResult<()> {
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(AppError::file(addr))?;
    eprintln!("listening on {}", listener.local_addr().map_err(AppError::file(addr))?);
    axum::serve(listener, router(config)).await.map_err(AppError::file(addr))
}

impl AppState {
    async fn session(&self, id: &str) -> ApiResult<Arc<Session>> {
        let unknown = || ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session `{id}`"));
        let key = Uuid::parse_str(id).map_err(|_| unknown())?;
        self.evict_idle().await;
        let session = self.sessions.read().await.get(&key).cloned().ok_or_else(unknown)?;
        *session.last_seen.lock().unwrap() = Instant::now();
        Ok(session)
    }

    async fn evict_idle(&self) {
        let timeout = self.config.idle_timeout;
        let now = Instant::now();
        self.sessions.write().await.retain(|_, s| now.duration_since(*s.last_seen.lock().unwrap()) < timeout);
    }
}

impl Session {
    async fn graph(&self, epsilon: f64, seed: u64) -> ApiResult<Arc<BuiltGraph>> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")).into());
        }
        let cell = self.graphs.lock().unwrap().entry((epsilon.to_bits(), seed)).or_default().clone();
        let cloud = self.cloud.clone();
        cell.get_or_try_init(|| {
            blocking(move || {
                let graph = build_graph(&cloud, &build_net(&cloud, epsilon, seed)?)?;
                let json = json::graph_to_string(&graph, &cloud, &[])?;
                Ok(Arc::new(BuiltGraph { graph, json }))
            })
        })
        .await
        .cloned()
    }
}

#[derive(Deserialize)]
struct CreateSession {
    csv: String,
    axes: Vec<String>,
    #[serde(default)]
    id_column: Option<String>,
    #[serde(default)]
    attributes: Option<Vec<String>>,
    #[serde(default)]
    required: Vec<String>,
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(req) = body?;
    let max_rows = state.config.max_rows;
    let loaded = blocking(move || {
        let spec =
            LoadSpec { axes: req.axes, id_column: req.id_column, attributes: req.attributes, required: req.required };
        let loaded = load_cloud(req.csv.as_bytes(), &spec)?;
        if loaded.cloud.len() > max_rows {
            return Err(
                Error::InvalidParameter(format!("{} rows exceed the cap of {max_rows}", loaded.cloud.len())).into()
            );
        }
        Ok(loaded)
    })
    .await?;
    let cloud = loaded.cloud;
    let body = json!({
        "rows": cloud.len(),
        "dropped": loaded.dropped,
        "axes": cloud.axis_names(),
        "attributes": cloud.attribute_names().collect::<Vec<_>>(),
    });
    let id = Uuid::new_v4();
    let session = Session {
        stats: Arc::new(axis_stats(&cloud)),
        cloud: Arc::new(cloud),
        graphs: Mutex::new(HashMap::new()),
        last_seen: Mutex::new(Instant::now()),
    };
    state.evict_idle().await;
    state.sessions.write().await.insert(id, Arc::new(session));
    let mut body = body;
    body["session_id"] = json!(id.to_string());
    Ok(json_text(StatusCode::CREATED, to_canonical_string(&body)))
}

async fn delete_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    state.session(&id).await?;
    let key = Uuid::parse_str(&id).expect("validated by session lookup");
    state.sessions.write().await.remove(&key);
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Deserialize, Clone, Copy)]
struct GraphRef {
    epsilon: f64,
    #[serde(default)]
    seed: u64,
}

async fn post_graph(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<GraphRef>, JsonRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id).await?;
    let Json(g) = body?;
    let built = session.graph(g.epsilon, g.seed).await?;
    Ok(json_text(StatusCode::OK, built.json.clone()))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> ApiResult<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| ApiError::malformed(format!("bad {what} `{s}`"))))
        .collect()
}

#[derive(Deserialize)]
struct SweepQuery {
    epsilons: String,
    #[serde(default)]
    seed: u64,
}

async fn get_sweep(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<SweepQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id).await?;
    let Query(q) = query?;
    let epsilons: Vec<f64> = parse_list(&q.epsilons, "epsilon")?;
    let cloud = session.cloud.clone();
    let rows = blocking(move || Ok(radius_sweep(&cloud, &epsilons, q.seed)?)).await?;
    Ok(canonical(&json::sweep_to_value(&rows)))
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ColoringRequest {
    Attribute {
        graph: GraphRef,
        column: String,
        #[serde(default = "default_aggregator")]
        aggregator: String,
    },
    Region {
        graph: GraphRef,
        column: String,
        equals: String,
    },
    ResidualThreshold {
        graph: GraphRef,
        outcome: String,
        regressors: Vec<String>,
        threshold: f64,
    },
    DistanceToBalls {
        graph: GraphRef,
        targets: Vec<u32>,
        #[serde(default)]
        exclude_zero_scale: bool,
    },
}

fn default_aggregator() -> String {
    "mean".into()
}

impl ColoringRequest {
    fn graph(&self) -> GraphRef {
        match self {
            ColoringRequest::Attribute { graph, .. }
            | ColoringRequest::Region { graph, .. }
            | ColoringRequest::ResidualThreshold { graph, .. }
            | ColoringRequest::DistanceToBalls { graph, .. } => *graph,
        }
    }
}

async fn post_coloring(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<ColoringRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id).await?;
    let Json(req) = body?;
    let g = req.graph();
    let built = session.graph(g.epsilon, g.seed).await?;
    let cloud = session.cloud.clone();
    let stats = session.stats.clone();
    let coloring = blocking(move || {
        let graph = &built.graph;
        Ok(match req {
            ColoringRequest::Attribute { column, aggregator, .. } => {
                let agg: Aggregator = aggregator.parse()?;
                color_by(graph, &cloud.column(&column)?, agg, &column)?
            }
            ColoringRequest::Region { column, equals, .. } => {
                subgroup_fraction(graph, &cloud.flags_equal(&column, &equals)?, &format!("{column} = {equals}"))?
            }
            ColoringRequest::ResidualThreshold { outcome, regressors, threshold, .. } => {
                let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
                let fit = ols_fit(&cloud, &outcome, &names)?;
                residual_threshold_fractions(graph, &fit, &[threshold])?.remove(0)
            }
            ColoringRequest::DistanceToBalls { targets, exclude_zero_scale, .. } => {
                let zero = if exclude_zero_scale { ZeroScale::ExcludeAxis } else { ZeroScale::Error };
                distance_coloring(graph, &cloud, &targets, &stats, zero)?
            }
        })
    })
    .await?;
    Ok(canonical(&json::coloring_to_value(&coloring)))
}

#[derive(Deserialize)]
struct ComparisonRequest {
    graph: GraphRef,
    group_a: Vec<u32>,
    group_b: Vec<u32>,
}

async fn post_comparison(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<ComparisonRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id).await?;
    let Json(req) = body?;
    let built = session.graph(req.graph.epsilon, req.graph.seed).await?;
    let report = compare_groups(&built.graph, &session.cloud, &req.group_a, &req.group_b, &session.stats)?;
    Ok(canonical(&json::comparison_to_value(&report)))
}

#[derive(Deserialize)]
struct LayoutQuery {
    /// `epsilon:seed`
    graph: String,
    layout_seed: Option<u64>,
}

async fn get_layout(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<LayoutQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id).await?;
    let Query(q) = query?;
    let (eps, seed) = q.graph.split_once(':').unwrap_or((q.graph.as_str(), "0"));
    let epsilon: f64 = eps.trim().parse().map_err(|_| ApiError::malformed(format!("bad epsilon `{eps}`")))?;
    let seed: u64 = seed.trim().parse().map_err(|_| ApiError::malformed(format!("bad seed `{seed}`")))?;
    let built = session.graph(epsilon, seed).await?;
    let layout_seed = q.layout_seed.unwrap_or(seed);
    let positions = blocking(move || Ok(layout(&built.graph, layout_seed))).await?;
    Ok(canonical(&json::layout_to_value(&positions)))
}
