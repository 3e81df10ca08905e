mod common;

use agroweather_core::DEFAULT_T_BASE;
use agroweather_datasource::{DataSource, DataSourceError, FetchRequest, ManualClock};
use agroweather_service::{router, AppState, ServiceConfig};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use chrono::{TimeZone, Utc};
use common::*;
use serde_json::Value;
use std::collections::HashSet;
use std::sync::Arc;

#[tokio::test]
async fn healthz() {
    let h = Harness::new("");
    let r = h.get("/healthz").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), serde_json::json!({ "status": "ok" }));
}

#[tokio::test]
async fn public_config_has_tiles_and_no_secrets() {
    let h = Harness::new("[map]\nhelp_url = \"https://example.org/help.pdf\"\n");
    let r = h.get("/api/v1/config/public").await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert!(v["tile_layers"]["street"]["url"].as_str().unwrap().contains("{z}"));
    assert!(v["tile_layers"]["satellite"]["url"].as_str().unwrap().contains("{z}"));
    assert_eq!(v["help_url"], "https://example.org/help.pdf");
    assert_eq!(v["defaults"]["t_base"], DEFAULT_T_BASE);
    assert_eq!(v["defaults"]["reference"]["n_years"], 5);
    let text = r.text();
    assert!(!text.contains(SECRET));
    assert!(!text.contains("username"));
    assert!(!text.contains(h.dir.path().to_str().unwrap()));
    assert!(!text.contains("cache"));
}

#[tokio::test]
async fn attributes_catalog_and_etag() {
    let h = Harness::new("");
    let r = h.get("/api/v1/attributes").await;
    assert_eq!(r.status, StatusCode::OK);
    let list = r.json()["attributes"].as_array().unwrap().clone();
    assert_eq!(list.len(), 18);
    assert!(list.iter().all(|a| !a["name"].as_str().unwrap().is_empty() && !a["unit"].as_str().unwrap().is_empty()));
    let etag = r.headers["etag"].to_str().unwrap().to_string();

    let again = h.get("/api/v1/attributes").await;
    assert_eq!(again.body, r.body);
    assert_eq!(again.headers["etag"], etag.as_str());

    let cached = h
        .send(Request::get("/api/v1/attributes").header("if-none-match", &etag).body(Body::empty()).unwrap())
        .await;
    assert_eq!(cached.status, StatusCode::NOT_MODIFIED);
    assert!(cached.body.is_empty());
}

#[tokio::test]
async fn catalog_override() {
    let h = Harness::new("[catalog]\nattributes = [\"VPD\", \"GDD_CUMULATIVE\", \"T_MAX\"]\n[catalog.names]\nVPD = \"Dryness of the air\"\n");
    let v = h.get("/api/v1/attributes").await.json();
    let list = v["attributes"].as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(list[0]["id"], "VPD");
    assert_eq!(list[0]["name"], "Dryness of the air");

    let r = h.get(&series_uri(30, "RAIN", false)).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert!(r.json()["message"].as_str().unwrap().contains("RAIN"));
}

#[tokio::test]
async fn series_comparison_difference_is_exact_subtraction() {
    let h = Harness::new("");
    let r = h.get(&series_uri(180, "VPD", true)).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text());
    let v = r.json();
    assert_eq!(v["dates"].as_array().unwrap().len(), 180);
    assert_eq!(v["dates"][0], "2021-10-01");
    assert_eq!(v["reference"]["label"], "previous 5-year average");
    assert_eq!(v["reference"]["day_zeros"].as_array().unwrap().len(), 5);
    let attrs = v["attributes"].as_array().unwrap();
    assert_eq!(attrs.len(), 1);
    let a = &attrs[0];
    assert_eq!(a["attribute"], "VPD");
    assert_eq!(a["unit"], "kPa");
    let cur = a["current"].as_array().unwrap();
    let refr = a["reference"].as_array().unwrap();
    let diff = a["difference"].as_array().unwrap();
    assert_eq!((cur.len(), refr.len(), diff.len()), (180, 180, 180));
    for i in 0..180 {
        match (cur[i].as_f64(), refr[i].as_f64()) {
            (Some(c), Some(r)) => assert_eq!(diff[i].as_f64().unwrap(), c - r, "index {i}"),
            _ => assert!(diff[i].is_null()),
        }
    }
    let sentences = a["sentences"].as_array().unwrap();
    assert_eq!(sentences.len(), 4);
    assert!(sentences[3].as_str().unwrap().contains("previous 5-year average"));
    let runs = &a["runs"];
    assert_eq!(
        runs["days_above"].as_u64().unwrap() + runs["days_below"].as_u64().unwrap(),
        diff.iter().filter(|d| d.as_f64().is_some_and(|d| d != 0.0)).count() as u64
    );
    let p = &v["provenance"];
    assert_eq!(p["source"], "fixture");
    assert_eq!(p["fetches"].as_array().unwrap().len(), 6);
    assert_eq!(p["cache_hit"], false);
}

#[tokio::test]
async fn series_response_covers_requested_attributes() {
    let h = Harness::new("");
    let codes = ALL_CODES.join(",");
    let v = h.get(&series_uri(60, &codes, false)).await.json();
    let got: Vec<&str> = v["attributes"].as_array().unwrap().iter().map(|a| a["attribute"].as_str().unwrap()).collect();
    assert_eq!(got, ALL_CODES.to_vec());
    for a in v["attributes"].as_array().unwrap() {
        assert_eq!(a["current"].as_array().unwrap().len(), 60);
        assert!(a["reference"].is_null() && a["difference"].is_null());
        assert!(a["sentences"].as_array().unwrap().len() >= 3);
    }
    assert!(v["reference"].is_null());
}

#[tokio::test]
async fn alerts_travel_with_series() {
    let h = Harness::new("");
    let uri = format!("{}&alert_min=30&alert_max=0", series_uri(30, "T_MIN", false));
    let r = h.get(&uri).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert!(r.text().contains("alerts"));

    let uri = format!("{}&alert_min=100&alert_window=9", series_uri(30, "T_MIN", false));
    let v = h.get(&uri).await.json();
    let alerts = v["alerts"].as_array().unwrap();
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0]["kind"], "BELOW_MIN");
    assert_eq!(alerts[0]["dates"].as_array().unwrap().len(), 9);
    assert_eq!(alerts[0]["dates"][8], "2021-10-30");

    let quiet = h.get(&format!("{}&alert_min=-100", series_uri(30, "T_MIN", false))).await.json();
    assert!(quiet["alerts"].as_array().unwrap().is_empty());
}

fn assert_error(r: &Reply, status: StatusCode, code: &str) -> Value {
    assert_eq!(r.status, status, "{}", r.text());
    let v = r.json();
    assert_eq!(v["code"], code);
    assert!(v["message"].is_string());
    assert!(v.get("details").is_some());
    v
}

#[tokio::test]
async fn error_taxonomy() {
    let h = Harness::new("");
    let v = assert_error(&h.get(&series_uri(0, "VPD", false)).await, StatusCode::BAD_REQUEST, "INVALID_REQUEST");
    assert_eq!(v["details"]["violations"][0]["field"], "length_days");

    let r = h.get("/api/v1/series?lat=abc&day_zero=yesterday&length_days=400&attributes=NOPE").await;
    let v = assert_error(&r, StatusCode::BAD_REQUEST, "INVALID_REQUEST");
    let fields: HashSet<&str> =
        v["details"]["violations"].as_array().unwrap().iter().map(|x| x["field"].as_str().unwrap()).collect();
    for f in ["lat", "lon", "day_zero", "length_days", "attributes"] {
        assert!(fields.contains(f), "missing violation for {f}: {v}");
    }

    let r = h.get("/api/v1/series?lat=0&lon=0&day_zero=2021-10-01&length_days=30").await;
    assert_error(&r, StatusCode::NOT_FOUND, "OUT_OF_COVERAGE");

    let r = h.get("/api/v1/series?lat=-30&lon=140&day_zero=2021-10-01&length_days=30").await;
    assert_error(&r, StatusCode::NOT_FOUND, "OUT_OF_COVERAGE");

    let r = h.get("/api/v1/series?lat=-34.56&lon=146.40&day_zero=2022-05-01&length_days=60").await;
    assert_error(&r, StatusCode::UNPROCESSABLE_ENTITY, "INSUFFICIENT_DATA");

    let r = h.get(&format!("{}&reference=season:2030", series_uri(30, "VPD", true))).await;
    assert_error(&r, StatusCode::BAD_REQUEST, "INVALID_REQUEST");

    let r = h
        .send(
            Request::post("/api/v1/report")
                .header("content-type", "application/json")
                .body(Body::from("{not json"))
                .unwrap(),
        )
        .await;
    assert_error(&r, StatusCode::BAD_REQUEST, "INVALID_REQUEST");

    let r = h.post_json("/api/v1/report", &report_body(&[], false)).await;
    assert_error(&r, StatusCode::BAD_REQUEST, "INVALID_REQUEST");
    let r = h.post_json("/api/v1/report", &report_body(&["VPD", "VPD"], false)).await;
    assert_error(&r, StatusCode::BAD_REQUEST, "INVALID_REQUEST");

    assert_error(&h.get("/api/v1/nothing").await, StatusCode::NOT_FOUND, "NOT_FOUND");
}

struct BrokenUpstream;

impl DataSource for BrokenUpstream {
    fn id(&self) -> &str {
        "broken"
    }

    fn fetch_csv(&self, request: &FetchRequest) -> Result<String, DataSourceError> {
        Err(DataSourceError::Network {
            request: *request,
            message: "connection refused".into(),
        })
    }

    fn last_published(&self) -> Option<chrono::NaiveDate> {
        None
    }
}

struct GarbledUpstream;

impl DataSource for GarbledUpstream {
    fn id(&self) -> &str {
        "garbled"
    }

    fn fetch_csv(&self, _: &FetchRequest) -> Result<String, DataSourceError> {
        Ok("date,max_temp\n2021-10-01,hot\n".into())
    }

    fn last_published(&self) -> Option<chrono::NaiveDate> {
        None
    }
}

#[tokio::test]
async fn upstream_failures_are_502() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "");
    let config = ServiceConfig::load_with_env(&path, []).unwrap();
    let clock = Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2022, 6, 2, 0, 0, 0).unwrap()));
    for source in [Arc::new(BrokenUpstream) as Arc<dyn DataSource>, Arc::new(GarbledUpstream)] {
        let state = Arc::new(AppState::new(config.clone(), source, clock.clone()).unwrap());
        let r = send(router(state), Request::get(series_uri(30, "VPD", false)).body(Body::empty()).unwrap()).await;
        assert_error(&r, StatusCode::BAD_GATEWAY, "UPSTREAM_ERROR");
    }
}

#[tokio::test]
async fn report_endpoint() {
    let h = Harness::new("");
    let six = h.post_json("/api/v1/report", &report_body(&ALL_CODES[..6], true)).await;
    assert_eq!(six.status, StatusCode::OK, "{}", six.text());
    assert_eq!(six.headers["content-type"], "application/pdf");
    assert_eq!(pdf_pages(&six.body), 1);

    let all = h.post_json("/api/v1/report", &report_body(&ALL_CODES, false)).await;
    assert_eq!(pdf_pages(&all.body), 3);

    let again = h.post_json("/api/v1/report", &report_body(&ALL_CODES[..6], true)).await;
    assert_eq!(again.body, six.body);
}

#[tokio::test]
async fn cors_only_for_configured_origin() {
    let h = Harness::new("[server]\ncors_origin = \"http://ui.example\"\n");
    let r = h
        .send(Request::get("/healthz").header("origin", "http://ui.example").body(Body::empty()).unwrap())
        .await;
    assert_eq!(r.headers["access-control-allow-origin"], "http://ui.example");
    let r = h
        .send(Request::get("/healthz").header("origin", "http://evil.example").body(Body::empty()).unwrap())
        .await;
    // the browser rejects the response because the allowed origin differs
    assert_ne!(
        r.headers.get("access-control-allow-origin").map(|v| v.to_str().unwrap()),
        Some("http://evil.example")
    );
    let h = Harness::new("");
    let r = h
        .send(Request::get("/healthz").header("origin", "http://ui.example").body(Body::empty()).unwrap())
        .await;
    assert!(r.headers.get("access-control-allow-origin").is_none());
}

#[tokio::test]
async fn serves_ui_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let ui = dir.path().join("ui");
    std::fs::create_dir(&ui).unwrap();
    std::fs::write(ui.join("index.html"), "<html>ui</html>").unwrap();
    let path = write_config(dir.path(), "[server]\nui_dir = \"ui\"\n");
    let config = ServiceConfig::load_with_env(&path, []).unwrap();
    let h = Harness::with_config(dir, config);
    let r = h.get("/").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.text(), "<html>ui</html>");
    let r = h.get("/some/client/route").await;
    assert_eq!(r.text(), "<html>ui</html>");
    assert_eq!(h.get("/api/v1/nope").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 8)]
async fn concurrent_series_fetch_each_key_once() {
    let h = Arc::new(Harness::new(""));
    let mut tasks = Vec::new();
    for i in 0..64 {
        let h = h.clone();
        tasks.push(tokio::spawn(async move {
            let len = LENGTHS[i % LENGTHS.len()];
            let attrs = if i % 3 == 0 { "VPD,T_MAX" } else { "GDD_CUMULATIVE" };
            let uri = series_uri(len, attrs, i % 2 == 0);
            let path = if i % 4 == 1 { "/api/v1/attributes".to_string() } else { uri };
            let r = h.get(&path).await;
            assert_eq!(r.status, StatusCode::OK, "{}", r.text());
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    let reads = h.source.reads_by_request();
    assert!(reads.values().all(|n| *n == 1), "{reads:?}");
    assert_eq!(h.source.total_reads(), reads.len());
    assert_eq!(reads.len(), LENGTHS.len() * 6);
}

#[tokio::test]
async fn replay_is_stable() {
    let h = Harness::new("");
    let uri = series_uri(90, "VPD,GDD_CUMULATIVE,RAIN", true);
    let cold = h.get(&uri).await;
    let warm1 = h.get(&uri).await;
    h.clock.advance(chrono::Duration::hours(1));
    let warm2 = h.get(&uri).await;
    assert_eq!(warm1.body, warm2.body);
    assert_eq!(warm1.json()["provenance"]["cache_hit"], true);
    let (mut c, mut w) = (cold.json(), warm1.json());
    c.as_object_mut().unwrap().remove("provenance");
    w.as_object_mut().unwrap().remove("provenance");
    assert_eq!(c, w);
}
