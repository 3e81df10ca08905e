//! Daily gridded weather ingestion.
//!
//! [`WeatherClient`] validates coverage, consults a [`DiskCache`] and falls
//! back to a [`DataSource`]: either [`HttpSource`] against a live endpoint or
//! [`FixtureSource`] replaying recorded responses for offline use. Upstream
//! CSV is parsed by header name ([`parse_daily_csv`]) and invariant
//! violations are demoted to missing values ([`validate_records`]).

pub mod cache;
pub mod client;
pub mod clock;
pub mod csv_io;
pub mod error;
pub mod request;
pub mod source;
pub mod synthetic;
pub mod validate;

pub use cache::{CacheKey, CacheOutcome, DiskCache, DEFAULT_TTL};
pub use client::{FetchedSeries, WeatherClient};
pub use clock::{Clock, ManualClock, SystemClock};
pub use csv_io::{parse_daily_csv, write_canonical_csv};
pub use error::{CoverageGap, DataSourceError, Result};
pub use request::FetchRequest;
pub use source::{write_fixture, DataSource, FixtureSource, HttpSource, HttpSourceConfig, RecordingSource};
pub use validate::{validate_records, Violation};
