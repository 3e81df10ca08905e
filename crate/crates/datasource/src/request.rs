use agroweather_core::{DateRange, GeoPoint};
use sha2::{Digest, Sha256};
use std::fmt;

/// A normalized upstream request: coordinates rounded to hundredths of a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FetchRequest {
    lat_hundredths: i32,
    lon_hundredths: i32,
    pub range: DateRange,
}

impl FetchRequest {
    pub fn new(point: GeoPoint, range: DateRange) -> Self {
        let (lat_hundredths, lon_hundredths) = point.rounded_hundredths();
        Self {
            lat_hundredths,
            lon_hundredths,
            range,
        }
    }

    pub fn point(&self) -> GeoPoint {
        GeoPoint::new(
            f64::from(self.lat_hundredths) / 100.0,
            f64::from(self.lon_hundredths) / 100.0,
        )
    }

    pub fn hundredths(&self) -> (i32, i32) {
        (self.lat_hundredths, self.lon_hundredths)
    }

    pub fn lat_text(&self) -> String {
        format_hundredths(self.lat_hundredths)
    }

    pub fn lon_text(&self) -> String {
        format_hundredths(self.lon_hundredths)
    }

    /// Canonical textual form, stable across platforms.
    pub fn canonical(&self) -> String {
        format!(
            "lat={}&lon={}&start={}&finish={}",
            self.lat_text(),
            self.lon_text(),
            compact_date(self.range.start),
            compact_date(self.range.end)
        )
    }

    /// File name a recorded fixture for this request is stored under.
    pub fn fixture_file_name(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        format!("{}.csv", hex::encode(&digest[..12]))
    }
}

impl fmt::Display for FetchRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) {}", self.lat_text(), self.lon_text(), self.range)
    }
}

fn format_hundredths(v: i32) -> String {
    let sign = if v < 0 { "-" } else { "" };
    let a = v.unsigned_abs();
    format!("{sign}{}.{:02}", a / 100, a % 100)
}

pub fn compact_date(d: chrono::NaiveDate) -> String {
    d.format("%Y%m%d").to_string()
}
