//! Deterministic synthetic weather in the upstream CSV dialect, for demos,
//! offline fixtures and tests. The value for a given day depends only on the
//! rounded coordinate and the date, so overlapping windows agree.

use agroweather_core::{DateRange, GeoPoint};
use chrono::{Datelike, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use crate::request::FetchRequest;
use crate::source::write_fixture;

pub const UPSTREAM_HEADER: &str = "latitude,longitude,YYYY-MM-DD,daily_rain,daily_rain_source,max_temp,max_temp_source,min_temp,min_temp_source,evap_pan,evap_pan_source,radiation,radiation_source,rh_tmax,rh_tmax_source,rh_tmin,rh_tmin_source,vp,vp_source,mslp,mslp_source,et_short_crop,et_short_crop_source,et_tall_crop,et_tall_crop_source,metadata";

/// One synthetic day, already rounded to upstream precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticDay {
    pub date: NaiveDate,
    pub rain: f64,
    pub t_max: f64,
    pub t_min: f64,
    pub evaporation: f64,
    pub radiation: f64,
    pub rh_at_tmax: f64,
    pub rh_at_tmin: f64,
    pub vapour_pressure: f64,
    pub mslp: f64,
    pub et_short_crop: f64,
    pub et_tall_crop: f64,
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

fn day_seed(lat_h: i32, lon_h: i32, date: NaiveDate) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in [lat_h as i64, lon_h as i64, i64::from(date.num_days_from_ce())] {
        for b in part.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub fn synthetic_day(point: GeoPoint, date: NaiveDate) -> SyntheticDay {
    let (lat_h, lon_h) = point.rounded_hundredths();
    let mut rng = ChaCha8Rng::seed_from_u64(day_seed(lat_h, lon_h, date));
    // southern hemisphere: warmest in mid-January
    let season = (TAU * (f64::from(date.ordinal()) - 15.0) / 365.25).cos();
    let inland = (f64::from(lon_h) / 100.0 - 140.0) / 20.0;
    let mean = 17.0 + 7.5 * season + rng.gen_range(-3.0..3.0) - (f64::from(lat_h).abs() / 100.0 - 30.0) * 0.4;
    let spread = 11.0 + 2.0 * inland + 2.0 * season + rng.gen_range(-2.5..2.5);
    let t_max = round1(mean + spread / 2.0);
    let t_min = round1(mean - spread / 2.0);
    let wet = rng.gen_bool(0.22);
    let rain = if wet { round1(-6.0 * (1.0 - rng.gen::<f64>()).ln()) } else { 0.0 };
    let rh_at_tmax = round1((38.0 - 12.0 * season + if wet { 20.0 } else { 0.0 } + rng.gen_range(-8.0..8.0)).clamp(5.0, 100.0));
    let rh_at_tmin = round1((78.0 - 8.0 * season + if wet { 12.0 } else { 0.0 } + rng.gen_range(-10.0..10.0)).clamp(20.0, 100.0));
    let radiation = round1((18.0 + 9.0 * season - if wet { 6.0 } else { 0.0 } + rng.gen_range(-2.0..2.0)).max(1.0));
    let evaporation = round1((4.5 + 3.5 * season + rng.gen_range(-1.0..1.0)).max(0.2));
    let es_min = 0.6108 * (17.27 * t_min / (t_min + 237.3)).exp();
    let vapour_pressure = round1(es_min * 10.0 * rh_at_tmin / 100.0);
    let mslp = round1(1015.0 - 4.0 * season + rng.gen_range(-6.0..6.0));
    let et_short_crop = round1((evaporation * 0.8).max(0.1));
    let et_tall_crop = round1((evaporation * 1.05).max(0.1));
    SyntheticDay {
        date,
        rain,
        t_max,
        t_min,
        evaporation,
        radiation,
        rh_at_tmax,
        rh_at_tmin,
        vapour_pressure,
        mslp,
        et_short_crop,
        et_tall_crop,
    }
}

/// Synthetic upstream CSV for `request`.
pub fn upstream_csv(request: &FetchRequest) -> String {
    let point = request.point();
    let mut out = String::with_capacity(160 * (request.range.len_days() + 1));
    out.push_str(UPSTREAM_HEADER);
    out.push('\n');
    for date in request.range.dates() {
        let d = synthetic_day(point, date);
        let _ = writeln!(
            out,
            "{},{},{},{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,{:.1},0,",
            request.lat_text(),
            request.lon_text(),
            date.format("%Y-%m-%d"),
            d.rain,
            d.t_max,
            d.t_min,
            d.evaporation,
            d.radiation,
            d.rh_at_tmax,
            d.rh_at_tmin,
            d.vapour_pressure,
            d.mslp,
            d.et_short_crop,
            d.et_tall_crop,
        );
    }
    out
}

/// Writes a synthetic recording for every window into a fixture directory.
pub fn populate_fixtures(dir: &Path, point: GeoPoint, ranges: &[DateRange]) -> io::Result<Vec<PathBuf>> {
    ranges
        .iter()
        .map(|range| {
            let request = FetchRequest::new(point, *range);
            write_fixture(dir, &request, &upstream_csv(&request))
        })
        .collect()
}
