//! Upstream data sources: a live HTTP endpoint or a directory of recordings.

use chrono::NaiveDate;
use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use crate::error::{CoverageGap, DataSourceError, Result};
use crate::request::{compact_date, FetchRequest};

/// First day of the gridded archive.
pub fn archive_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(1889, 1, 1).expect("valid date")
}

/// A provider of raw daily CSV for a coordinate and date window.
pub trait DataSource: Send + Sync {
    /// Short identifier, used in cache keys and provenance.
    fn id(&self) -> &str;

    fn fetch_csv(&self, request: &FetchRequest) -> Result<String>;

    /// Last day with published data, when known without asking upstream.
    fn last_published(&self) -> Option<NaiveDate> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct HttpSourceConfig {
    pub base_url: String,
    /// Query parameter identifying the caller to the upstream service, e.g. `("username", "me@example.org")`.
    pub identification: Option<(String, String)>,
    /// Further fixed query parameters the endpoint requires.
    pub extra_params: Vec<(String, String)>,
    pub timeout: Duration,
    pub last_published: Option<NaiveDate>,
}

impl HttpSourceConfig {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            identification: None,
            extra_params: Vec::new(),
            timeout: Duration::from_secs(30),
            last_published: None,
        }
    }
}

/// Issues `GET base_url?lat=..&lon=..&start=YYYYMMDD&finish=YYYYMMDD&format=csv`.
pub struct HttpSource {
    config: HttpSourceConfig,
    agent: ureq::Agent,
}

impl HttpSource {
    pub fn new(config: HttpSourceConfig) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(config.timeout).build();
        Self { config, agent }
    }

    pub fn query_pairs(&self, request: &FetchRequest) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("lat".to_string(), request.lat_text()),
            ("lon".to_string(), request.lon_text()),
            ("start".to_string(), compact_date(request.range.start)),
            ("finish".to_string(), compact_date(request.range.end)),
            ("format".to_string(), "csv".to_string()),
        ];
        pairs.extend(self.config.identification.iter().cloned());
        pairs.extend(self.config.extra_params.iter().cloned());
        pairs
    }
}

impl DataSource for HttpSource {
    fn id(&self) -> &str {
        "silo"
    }

    fn fetch_csv(&self, request: &FetchRequest) -> Result<String> {
        let mut call = self.agent.get(&self.config.base_url);
        for (k, v) in self.query_pairs(request) {
            call = call.query(&k, &v);
        }
        let network = |message: String| DataSourceError::Network {
            request: *request,
            message,
        };
        match call.call() {
            Ok(response) => response.into_string().map_err(|e| network(format!("reading body: {e}"))),
            Err(ureq::Error::Status(code, _)) => Err(network(format!("upstream returned HTTP {code}"))),
            Err(e) => Err(network(e.to_string())),
        }
    }

    fn last_published(&self) -> Option<NaiveDate> {
        self.config.last_published
    }
}

/// Serves recorded responses from a directory. Each file is named by a hash
/// of the canonical request; a request with no recording is out of coverage.
pub struct FixtureSource {
    dir: PathBuf,
    last_published: Option<NaiveDate>,
    reads: Mutex<HashMap<String, usize>>,
    total_reads: AtomicUsize,
}

impl FixtureSource {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            last_published: None,
            reads: Mutex::new(HashMap::new()),
            total_reads: AtomicUsize::new(0),
        }
    }

    pub fn with_last_published(mut self, day: Option<NaiveDate>) -> Self {
        self.last_published = day;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Number of fixture files read so far.
    pub fn total_reads(&self) -> usize {
        self.total_reads.load(Ordering::SeqCst)
    }

    /// Reads per distinct request, keyed by canonical request text.
    pub fn reads_by_request(&self) -> HashMap<String, usize> {
        self.reads.lock().unwrap().clone()
    }
}

impl DataSource for FixtureSource {
    fn id(&self) -> &str {
        "fixture"
    }

    fn fetch_csv(&self, request: &FetchRequest) -> Result<String> {
        let path = self.dir.join(request.fixture_file_name());
        match fs::read_to_string(&path) {
            Ok(text) => {
                self.total_reads.fetch_add(1, Ordering::SeqCst);
                *self.reads.lock().unwrap().entry(request.canonical()).or_default() += 1;
                Ok(text)
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => Err(DataSourceError::OutOfCoverage {
                request: *request,
                gap: CoverageGap::NoFixture,
            }),
            Err(e) => Err(DataSourceError::Network {
                request: *request,
                message: format!("reading fixture {}: {e}", path.display()),
            }),
        }
    }

    fn last_published(&self) -> Option<NaiveDate> {
        self.last_published
    }
}

/// Passes requests to another source and saves every response as a fixture.
pub struct RecordingSource<S> {
    inner: S,
    dir: PathBuf,
}

impl<S: DataSource> RecordingSource<S> {
    pub fn new(inner: S, dir: impl Into<PathBuf>) -> Self {
        Self {
            inner,
            dir: dir.into(),
        }
    }
}

impl<S: DataSource> DataSource for RecordingSource<S> {
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn fetch_csv(&self, request: &FetchRequest) -> Result<String> {
        let text = self.inner.fetch_csv(request)?;
        write_fixture(&self.dir, request, &text).map_err(|source| DataSourceError::CacheIo {
            range: request.range,
            source,
        })?;
        Ok(text)
    }

    fn last_published(&self) -> Option<NaiveDate> {
        self.inner.last_published()
    }
}

/// Stores `csv` as the recording for `request` under `dir`.
pub fn write_fixture(dir: &Path, request: &FetchRequest, csv: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(request.fixture_file_name());
    fs::write(&path, csv)?;
    Ok(path)
}
