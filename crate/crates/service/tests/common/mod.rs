#![allow(dead_code)]

use agroweather_core::{DateRange, GeoPoint, SeasonSpec};
use agroweather_datasource::synthetic::populate_fixtures;
use agroweather_datasource::{FixtureSource, ManualClock};
use agroweather_service::{router, AppState, ServiceConfig};
use axum::body::Body;
use axum::http::{HeaderMap, Request, StatusCode};
use axum::Router;
use chrono::{NaiveDate, TimeZone, Utc};
use http_body_util::BodyExt;
use std::path::Path;
use std::sync::Arc;
use tempfile::TempDir;
use tower::ServiceExt;

pub const POINT: GeoPoint = GeoPoint::new(-34.56, 146.40);
pub const LENGTHS: [u32; 5] = [30, 60, 90, 120, 180];
pub const SECRET: &str = "secret-id@example.org";

pub fn day_zero() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 10, 1).unwrap()
}

/// Synthetic recordings for every season length in [`LENGTHS`] starting on
/// [`day_zero`], plus the five preceding years of each.
pub fn write_fixtures(dir: &Path) {
    let mut ranges: Vec<DateRange> = Vec::new();
    for len in LENGTHS {
        let spec = SeasonSpec::new(day_zero(), len, 10.0).unwrap();
        for back in 0..=5 {
            ranges.push(spec.shifted_back(back).unwrap().range());
        }
    }
    populate_fixtures(dir, POINT, &ranges).unwrap();
}

pub fn write_config(root: &Path, extra: &str) -> std::path::PathBuf {
    let fixtures = root.join("fixtures");
    if !fixtures.exists() {
        std::fs::create_dir_all(&fixtures).unwrap();
        write_fixtures(&fixtures);
    }
    let path = root.join("agroweather.toml");
    std::fs::write(
        &path,
        format!(
            "[source]\nfixture_dir = \"fixtures\"\nlast_published = \"2022-06-01\"\n\
             identification_param = \"username\"\nidentification_value = \"{SECRET}\"\n\
             [cache]\ndir = \"cache\"\n{extra}"
        ),
    )
    .unwrap();
    path
}

pub struct Harness {
    pub dir: TempDir,
    pub config: ServiceConfig,
    pub source: Arc<FixtureSource>,
    pub clock: Arc<ManualClock>,
    pub state: Arc<AppState>,
}

impl Harness {
    pub fn new(extra_toml: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(dir.path(), extra_toml);
        let config = ServiceConfig::load_with_env(&path, []).unwrap();
        Self::with_config(dir, config)
    }

    pub fn with_config(dir: TempDir, config: ServiceConfig) -> Self {
        let source = Arc::new(
            FixtureSource::new(config.source.fixture_dir.clone().unwrap()).with_last_published(config.source.last_published),
        );
        let clock = Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2022, 6, 2, 0, 0, 0).unwrap()));
        let state = Arc::new(AppState::new(config.clone(), source.clone(), clock.clone()).unwrap());
        Self {
            dir,
            config,
            source,
            clock,
            state,
        }
    }

    pub fn app(&self) -> Router {
        router(self.state.clone())
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.send(Request::get(uri).body(Body::empty()).unwrap()).await
    }

    pub async fn post_json(&self, uri: &str, body: &serde_json::Value) -> Reply {
        self.send(
            Request::post(uri)
                .header("content-type", "application/json")
                .body(Body::from(body.to_string()))
                .unwrap(),
        )
        .await
    }

    pub async fn send(&self, req: Request<Body>) -> Reply {
        send(self.app(), req).await
    }
}

pub async fn send(app: Router, req: Request<Body>) -> Reply {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, body }
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("body is not JSON ({e}): {}", String::from_utf8_lossy(&self.body)))
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.body).into_owned()
    }
}

pub fn series_uri(len: u32, attributes: &str, comparison: bool) -> String {
    format!(
        "/api/v1/series?lat=-34.56&lon=146.40&day_zero=2021-10-01&length_days={len}&attributes={attributes}&comparison={comparison}"
    )
}

pub fn report_body(attributes: &[&str], comparison: bool) -> serde_json::Value {
    serde_json::json!({
        "point": { "latitude": -34.56, "longitude": 146.40 },
        "season": { "day_zero": "2021-10-01", "length_days": 120, "t_base": 10.0 },
        "attributes": attributes,
        "comparison": comparison,
        "reference": { "kind": "mean_of_last", "n_years": 5 },
        "generated_at": "2022-03-01T09:30:00Z",
    })
}

pub fn pdf_pages(bytes: &[u8]) -> usize {
    assert!(bytes.starts_with(b"%PDF-"), "missing PDF magic");
    lopdf::Document::load_mem(bytes).expect("structurally valid PDF").get_pages().len()
}

pub const ALL_CODES: [&str; 18] = [
    "T_MAX",
    "T_MIN",
    "T_MEAN",
    "DIURNAL_RANGE",
    "RAIN",
    "RAIN_CUMULATIVE",
    "EVAPORATION",
    "RADIATION",
    "RH_AT_TMAX",
    "RH_AT_TMIN",
    "VAPOUR_PRESSURE",
    "MSLP",
    "ET_SHORT_CROP",
    "ET_TALL_CROP",
    "GDD_DAILY",
    "GDD_CUMULATIVE",
    "VPD",
    "FROST_DAYS_CUMULATIVE",
];
