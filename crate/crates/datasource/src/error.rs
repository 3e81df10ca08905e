use agroweather_core::DateRange;
use thiserror::Error;

use crate::request::FetchRequest;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageGap {
    /// The point lies outside the source's bounding box.
    Location,
    /// Dates precede the start of the archive.
    BeforeArchive,
    /// Dates run past the last day the source has published.
    NotYetPublished,
    /// Fixture mode has no recording for this request.
    NoFixture,
}

#[derive(Debug, Error)]
pub enum DataSourceError {
    #[error("upstream request for {request} failed: {message}")]
    Network { request: FetchRequest, message: String },

    #[error("parse error at line {line}, column `{column}`: {message}")]
    Parse {
        line: usize,
        column: String,
        message: String,
    },

    #[error("{request} is outside source coverage ({gap:?})")]
    OutOfCoverage { request: FetchRequest, gap: CoverageGap },

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("cache storage failed for {range}: {source}")]
    CacheIo {
        range: DateRange,
        #[source]
        source: std::io::Error,
    },
}

impl DataSourceError {
    pub(crate) fn parse(line: usize, column: impl Into<String>, message: impl Into<String>) -> Self {
        DataSourceError::Parse {
            line,
            column: column.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, DataSourceError>;
