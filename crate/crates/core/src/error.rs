use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {} missing date(s), first {}", missing.len(), missing.first().map(|d| d.to_string()).unwrap_or_default())]
    InsufficientData { missing: Vec<NaiveDate> },

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("mismatched series: {dimension} differs ({detail})")]
    MismatchedSeries {
        dimension: &'static str,
        detail: String,
    },

    #[error("series has no non-missing values")]
    EmptySeries,

    #[error("invalid season spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
