use agroweather_core::CoreError;
use agroweather_datasource::{CoverageGap, DataSourceError};
use agroweather_report::ReportError;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Wire form of every error the API returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>, details: Value) -> Self {
        Self {
            status,
            body: ErrorBody {
                code: code.to_string(),
                message: message.into(),
                details,
            },
        }
    }

    /// 400 listing every offending parameter.
    pub fn invalid(violations: Vec<Violation>) -> Self {
        let message = violations
            .iter()
            .map(|v| format!("{}: {}", v.field, v.message))
            .collect::<Vec<_>>()
            .join("; ");
        Self::new(
            StatusCode::BAD_REQUEST,
            "INVALID_REQUEST",
            message,
            json!({ "violations": violations }),
        )
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", message, Value::Null)
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        if !self.body.details.is_object() {
            self.body.details = json!({});
        }
        self.body.details[key] = value.into();
        self
    }

    pub fn code(&self) -> &str {
        &self.body.code
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({}): {}", self.body.code, self.status.as_u16(), self.body.message)
    }
}

impl std::error::Error for ApiError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<DataSourceError> for ApiError {
    fn from(e: DataSourceError) -> Self {
        let message = e.to_string();
        match e {
            DataSourceError::OutOfCoverage { request, gap } => {
                let details = json!({
                    "gap": format!("{gap:?}"),
                    "lat": request.lat_text(),
                    "lon": request.lon_text(),
                    "start": request.range.start,
                    "end": request.range.end,
                });
                match gap {
                    CoverageGap::NotYetPublished => {
                        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "INSUFFICIENT_DATA", message, details)
                    }
                    _ => ApiError::new(StatusCode::NOT_FOUND, "OUT_OF_COVERAGE", message, details),
                }
            }
            DataSourceError::Network { .. } => {
                ApiError::new(StatusCode::BAD_GATEWAY, "UPSTREAM_ERROR", message, Value::Null)
            }
            DataSourceError::Parse { line, column, .. } => ApiError::new(
                StatusCode::BAD_GATEWAY,
                "UPSTREAM_ERROR",
                message,
                json!({ "line": line, "column": column }),
            ),
            DataSourceError::InvalidRequest(m) => ApiError::invalid(vec![Violation::new("request", m)]),
            DataSourceError::CacheIo { .. } => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "CACHE_ERROR", message, Value::Null)
            }
        }
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let message = e.to_string();
        match e {
            CoreError::InsufficientData { missing } => ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "INSUFFICIENT_DATA",
                message,
                json!({ "missing": missing }),
            ),
            CoreError::EmptySeries => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "INSUFFICIENT_DATA", message, Value::Null)
            }
            CoreError::MismatchedSeries { .. } => ApiError::internal(message),
            CoreError::Domain(m) | CoreError::InvalidSpec(m) => {
                ApiError::invalid(vec![Violation::new("request", m)])
            }
            CoreError::UnknownAttribute(a) => ApiError::invalid(vec![Violation::new(
                "attributes",
                format!("unknown attribute `{a}`"),
            )]),
        }
    }
}

impl From<ReportError> for ApiError {
    fn from(e: ReportError) -> Self {
        let message = e.to_string();
        match e {
            ReportError::Layout(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "LAYOUT_ERROR", message, Value::Null)
            }
            ReportError::EmptySeries => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "INSUFFICIENT_DATA", message, Value::Null)
            }
            ReportError::InvalidSpec(m) => ApiError::invalid(vec![Violation::new("spec", m)]),
            ReportError::Template(_) => ApiError::internal(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
