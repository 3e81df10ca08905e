use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("layout error: {0}")]
    Layout(String),

    #[error("cannot chart an empty series")]
    EmptySeries,

    #[error("invalid report spec: {0}")]
    InvalidSpec(String),

    #[error("template error: {0}")]
    Template(String),
}

pub type Result<T> = std::result::Result<T, ReportError>;
