//! Agro-climatic series math for daily gridded weather.
//!
//! Everything here is pure and deterministic: growing-degree days,
//! vapour-pressure deficit, day-zero season slicing, multi-season reference
//! averaging, difference series, summary statistics and threshold alerts.
//! With the default `parallel` feature, batch operations spread across the
//! rayon thread pool; results are bit-identical to the sequential path.

pub mod alerts;
pub mod attribute;
pub mod compare;
pub mod error;
pub mod gdd;
pub mod geo;
pub mod parallel;
pub mod record;
pub mod season;
pub mod series;
pub mod stats;
pub mod vpd;

pub use alerts::{evaluate_alerts, Alert, AlertConfig, AlertKind};
pub use attribute::{AttributeCatalog, AttributeId, AttributeInfo};
pub use compare::{difference_series, reference_series, ComparisonResult, DifferenceRuns, ReferenceKind, RunDirection};
pub use error::{CoreError, Result};
pub use gdd::{cumulative_gdd, daily_gdd, GddMethod};
pub use geo::{BoundingBox, GeoPoint};
pub use record::{DailyRecord, DateRange, Field, Quality};
pub use season::{slice_season, SeasonSeries, SeasonSpec};
pub use series::{derive_attribute, derive_attributes, DerivedSeries};
pub use stats::{summary_stats, SummaryStats, Trend};
pub use vpd::{saturation_vp, vpd};

/// Base temperature used when none is configured, °C.
pub const DEFAULT_T_BASE: f64 = 10.0;
