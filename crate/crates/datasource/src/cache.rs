//! On-disk record cache with per-key single-flight fetching.

use agroweather_core::{DailyRecord, DateRange, GeoPoint};
use chrono::{DateTime, Duration, Utc};
use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::clock::Clock;
use crate::csv_io::{parse_daily_csv, write_canonical_csv};
use crate::error::{DataSourceError, Result};
use crate::request::{compact_date, FetchRequest};

pub const DEFAULT_TTL: Duration = Duration::hours(6);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub request: FetchRequest,
    pub source: String,
}

impl CacheKey {
    pub fn new(point: GeoPoint, range: DateRange, source: impl Into<String>) -> Self {
        Self {
            request: FetchRequest::new(point, range),
            source: source.into(),
        }
    }

    pub fn file_stem(&self) -> String {
        let source: String = self
            .source
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        let (lat, lon) = self.request.hundredths();
        format!(
            "{source}_{lat}_{lon}_{}_{}",
            compact_date(self.request.range.start),
            compact_date(self.request.range.end)
        )
    }
}

/// Result of a cache lookup.
#[derive(Debug)]
pub struct CacheOutcome {
    pub records: Arc<Vec<DailyRecord>>,
    pub hit: bool,
    /// When the records were obtained from upstream.
    pub fetched_at: DateTime<Utc>,
    /// Set when the records could not be persisted; they are still served.
    pub store_error: Option<DataSourceError>,
}

pub struct DiskCache {
    dir: PathBuf,
    ttl: Duration,
    clock: Arc<dyn Clock>,
    in_flight: Mutex<HashMap<CacheKey, Arc<Mutex<()>>>>,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>, ttl: Duration, clock: Arc<dyn Clock>) -> Self {
        Self {
            dir: dir.into(),
            ttl,
            clock,
            in_flight: Mutex::new(HashMap::new()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn paths(&self, key: &CacheKey) -> (PathBuf, PathBuf) {
        let stem = key.file_stem();
        (self.dir.join(format!("{stem}.csv")), self.dir.join(format!("{stem}.meta")))
    }

    /// Returns cached records for `key`, or runs `fetcher` once and stores its
    /// result. Concurrent callers with the same key wait for the first fetch.
    /// A `volatile` entry (one covering the newest publishable day) expires
    /// after the TTL; other entries never expire.
    pub fn get_or_fetch<F>(&self, key: &CacheKey, volatile: bool, fetcher: F) -> Result<CacheOutcome>
    where
        F: FnOnce() -> Result<Vec<DailyRecord>>,
    {
        let slot = {
            let mut map = self.in_flight.lock().unwrap_or_else(|e| e.into_inner());
            Arc::clone(map.entry(key.clone()).or_default())
        };
        let outcome = {
            let _guard = slot.lock().unwrap_or_else(|e| e.into_inner());
            match self.load(key) {
                Some((records, fetched_at)) if !volatile || self.clock.now() - fetched_at < self.ttl => {
                    Ok(CacheOutcome {
                        records: Arc::new(records),
                        hit: true,
                        fetched_at,
                        store_error: None,
                    })
                }
                _ => fetcher().map(|records| {
                    let fetched_at = self.clock.now();
                    let store_error = self.store(key, &records, fetched_at).err().map(|source| {
                        log::warn!("cache write for {} failed: {source}", key.request);
                        DataSourceError::CacheIo {
                            range: key.request.range,
                            source,
                        }
                    });
                    CacheOutcome {
                        records: Arc::new(records),
                        hit: false,
                        fetched_at,
                        store_error,
                    }
                }),
            }
        };
        let mut map = self.in_flight.lock().unwrap_or_else(|e| e.into_inner());
        // only the map and this call hold the slot: nobody else is waiting on it
        if Arc::strong_count(&slot) == 2 {
            map.remove(key);
        }
        outcome
    }

    fn load(&self, key: &CacheKey) -> Option<(Vec<DailyRecord>, DateTime<Utc>)> {
        let (data, meta) = self.paths(key);
        let fetched_at = fs::read_to_string(meta)
            .ok()?
            .lines()
            .find_map(|l| l.strip_prefix("fetched_at="))
            .and_then(|t| DateTime::parse_from_rfc3339(t.trim()).ok())?
            .with_timezone(&Utc);
        let text = fs::read_to_string(&data).ok()?;
        match parse_daily_csv(&text) {
            Ok(records) => Some((records, fetched_at)),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", data.display());
                None
            }
        }
    }

    fn store(&self, key: &CacheKey, records: &[DailyRecord], fetched_at: DateTime<Utc>) -> io::Result<()> {
        let (data, meta) = self.paths(key);
        write_atomic(&data, write_canonical_csv(records).as_bytes())?;
        write_atomic(&meta, format!("fetched_at={}\n", fetched_at.to_rfc3339()).as_bytes())
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{:?}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::thread::current().id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)
}
