//! HTTP routes.

use agroweather_core::{AlertConfig, AttributeId, AttributeInfo, BoundingBox, GddMethod, GeoPoint, ReferenceKind};
use agroweather_datasource::{Clock, DataSource};
use agroweather_report::ReportSpec;
use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::sync::Arc;
use tower_http::cors::CorsLayer;
use tower_http::services::{ServeDir, ServeFile};

use crate::config::ServiceConfig;
use crate::error::{ApiError, Violation};
use crate::pipeline::{client_from_config, Analyzer, SeriesResponse};

pub struct AppState {
    pub analyzer: Arc<Analyzer>,
    attributes_body: String,
    attributes_etag: String,
    public_config: PublicConfig,
}

impl AppState {
    pub fn new(config: ServiceConfig, source: Arc<dyn DataSource>, clock: Arc<dyn Clock>) -> Result<Self, ApiError> {
        let client = client_from_config(&config, source, clock);
        let analyzer = Analyzer::new(config, client)?;
        let attributes_body = serde_json::to_string(&AttributesBody {
            attributes: analyzer.catalog().entries().to_vec(),
        })
        .map_err(|e| ApiError::internal(e.to_string()))?;
        let digest = Sha256::digest(attributes_body.as_bytes());
        let attributes_etag = format!("\"{}\"", hex::encode(&digest[..16]));
        let public_config = PublicConfig::from_analyzer(&analyzer);
        Ok(Self {
            analyzer: Arc::new(analyzer),
            attributes_body,
            attributes_etag,
            public_config,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributesBody {
    pub attributes: Vec<AttributeInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileLayer {
    pub url: String,
    pub attribution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileLayers {
    pub street: TileLayer,
    pub satellite: Option<TileLayer>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapView {
    pub center: GeoPoint,
    pub zoom: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub t_base: f64,
    pub gdd_method: GddMethod,
    pub reference: ReferenceKind,
    pub length_days: u32,
    pub alerts: AlertConfig,
    pub attributes: Vec<AttributeId>,
}

/// Bootstrap document for the browser UI. Holds nothing a visitor should not
/// see: no filesystem paths, no upstream credentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicConfig {
    pub tile_layers: TileLayers,
    pub help_url: Option<String>,
    pub map: MapView,
    pub bounds: BoundingBox,
    pub defaults: Defaults,
    pub data_attribution: String,
    pub version: String,
}

impl PublicConfig {
    fn from_analyzer(a: &Analyzer) -> Self {
        let c = a.config();
        Self {
            tile_layers: TileLayers {
                street: TileLayer {
                    url: c.map.street_tile_url.clone(),
                    attribution: c.map.street_attribution.clone(),
                },
                satellite: c.map.satellite_tile_url.clone().map(|url| TileLayer {
                    url,
                    attribution: c.map.satellite_attribution.clone().unwrap_or_default(),
                }),
            },
            help_url: c.map.help_url.clone(),
            map: MapView {
                center: GeoPoint::new(c.map.center_lat, c.map.center_lon),
                zoom: c.map.zoom,
            },
            bounds: (&c.bounds).into(),
            defaults: Defaults {
                t_base: c.analysis.t_base,
                gdd_method: c.analysis.gdd_method,
                reference: c.default_reference(),
                length_days: c.analysis.length_days,
                alerts: c.alerts,
                attributes: a.catalog().entries().iter().map(|e| e.id).collect(),
            },
            data_attribution: a.data_attribution(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let config = state.analyzer.config().clone();
    let mut app = Router::new()
        .route("/healthz", get(healthz))
        .route("/api/v1/config/public", get(public_config))
        .route("/api/v1/attributes", get(attributes))
        .route("/api/v1/series", get(series))
        .route("/api/v1/report", post(report))
        .route("/api/{*rest}", get(api_not_found).post(api_not_found))
        .with_state(state);
    app = match &config.server.ui_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html")))),
        None => app.fallback(api_not_found),
    };
    if let Some(origin) = config.server.cors_origin.as_deref().and_then(|o| HeaderValue::from_str(o).ok()) {
        app = app.layer(
            CorsLayer::new()
                .allow_origin(origin)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([header::CONTENT_TYPE, header::IF_NONE_MATCH])
                .expose_headers([header::ETAG]),
        );
    }
    app
}

async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn api_not_found(uri: Uri) -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NOT_FOUND", format!("no route for {}", uri.path()), Value::Null)
}

async fn public_config(State(state): State<Arc<AppState>>) -> Json<PublicConfig> {
    Json(state.public_config.clone())
}

async fn attributes(State(state): State<Arc<AppState>>, headers: HeaderMap) -> Response {
    let etag = state.attributes_etag.as_str();
    let matches = headers
        .get(header::IF_NONE_MATCH)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|t| t.trim() == etag || t.trim() == "*"));
    let common = [(header::ETAG, etag.to_string()), (header::CACHE_CONTROL, "no-cache".to_string())];
    if matches {
        (StatusCode::NOT_MODIFIED, common).into_response()
    } else {
        (
            common,
            [(header::CONTENT_TYPE, "application/json")],
            state.attributes_body.clone(),
        )
            .into_response()
    }
}

async fn series(State(state): State<Arc<AppState>>, uri: Uri) -> Result<Json<SeriesResponse>, ApiError> {
    let axum::extract::Query(params) = axum::extract::Query::<Vec<(String, String)>>::try_from_uri(&uri)
        .map_err(|e| ApiError::invalid(vec![Violation::new("query", e.body_text())]))?;
    let analyzer = state.analyzer.clone();
    let request = analyzer.parse_series_query(&params)?;
    let response = tokio::task::spawn_blocking(move || analyzer.series(&request))
        .await
        .map_err(|e| ApiError::internal(format!("analysis task failed: {e}")))??;
    Ok(Json(response))
}

async fn report(
    State(state): State<Arc<AppState>>,
    body: Result<Json<ReportSpec>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(spec) = body.map_err(|e| ApiError::invalid(vec![Violation::new("body", e.body_text())]))?;
    let analyzer = state.analyzer.clone();
    let pdf = tokio::task::spawn_blocking(move || analyzer.report(&spec))
        .await
        .map_err(|e| ApiError::internal(format!("report task failed: {e}")))??;
    Ok((
        [
            (header::CONTENT_TYPE, "application/pdf"),
            (header::CONTENT_DISPOSITION, "attachment; filename=\"agroweather-report.pdf\""),
        ],
        pdf,
    )
        .into_response())
}
