use agroweather_core::{BoundingBox, DailyRecord, DateRange, GeoPoint};
use chrono::{DateTime, Days, NaiveDate, Utc};
use std::sync::Arc;

use crate::cache::{CacheKey, DiskCache};
use crate::clock::Clock;
use crate::csv_io::parse_daily_csv;
use crate::error::{CoverageGap, DataSourceError, Result};
use crate::request::FetchRequest;
use crate::source::{archive_start, DataSource};
use crate::validate::validate_records;

/// Records for one request plus where they came from.
#[derive(Debug, Clone)]
pub struct FetchedSeries {
    pub records: Arc<Vec<DailyRecord>>,
    pub source: String,
    pub cache_hit: bool,
    pub fetched_at: DateTime<Utc>,
}

/// Validated, cached access to a [`DataSource`].
pub struct WeatherClient {
    source: Arc<dyn DataSource>,
    cache: DiskCache,
    bounds: BoundingBox,
    clock: Arc<dyn Clock>,
}

impl WeatherClient {
    pub fn new(source: Arc<dyn DataSource>, cache: DiskCache, bounds: BoundingBox, clock: Arc<dyn Clock>) -> Self {
        Self {
            source,
            cache,
            bounds,
            clock,
        }
    }

    pub fn source_id(&self) -> &str {
        self.source.id()
    }

    pub fn bounds(&self) -> &BoundingBox {
        &self.bounds
    }

    /// Newest day the source is expected to have published. Falls back to
    /// yesterday (UTC) when the source does not say.
    pub fn last_published(&self) -> NaiveDate {
        self.source.last_published().unwrap_or_else(|| {
            self.clock.now().date_naive() - Days::new(1)
        })
    }

    /// Checks coverage without fetching anything.
    pub fn check_coverage(&self, point: GeoPoint, range: DateRange) -> Result<()> {
        let request = FetchRequest::new(point, range);
        let gap = if !self.bounds.contains(&point) {
            Some(CoverageGap::Location)
        } else if range.start < archive_start() {
            Some(CoverageGap::BeforeArchive)
        } else if range.end > self.last_published() {
            Some(CoverageGap::NotYetPublished)
        } else {
            None
        };
        match gap {
            Some(gap) => Err(DataSourceError::OutOfCoverage { request, gap }),
            None => Ok(()),
        }
    }

    /// One record per calendar day of `range`, ascending. Days the source
    /// did not report come back with every field missing.
    pub fn fetch_daily_series(&self, point: GeoPoint, range: DateRange) -> Result<FetchedSeries> {
        self.check_coverage(point, range)?;
        let key = CacheKey::new(point, range, self.source.id());
        let volatile = range.end >= self.last_published();
        let outcome = self.cache.get_or_fetch(&key, volatile, || {
            let text = self.source.fetch_csv(&key.request)?;
            let (records, violations) = validate_records(parse_daily_csv(&text)?);
            for v in &violations {
                log::info!("{}: demoted {v}", key.request);
            }
            Ok(align_to_range(records, range))
        })?;
        Ok(FetchedSeries {
            records: outcome.records,
            source: self.source.id().to_string(),
            cache_hit: outcome.hit,
            fetched_at: outcome.fetched_at,
        })
    }
}

fn align_to_range(records: Vec<DailyRecord>, range: DateRange) -> Vec<DailyRecord> {
    let mut by_date = records.into_iter().filter(|r| range.contains(r.date)).peekable();
    range
        .dates()
        .map(|date| match by_date.peek() {
            Some(r) if r.date == date => by_date.next().expect("peeked"),
            _ => DailyRecord::empty(date),
        })
        .collect()
}
