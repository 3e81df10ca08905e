use serde::{Deserialize, Serialize};
use std::fmt;

/// A coordinate in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoPoint {
    pub const fn new(latitude: f64, longitude: f64) -> Self {
        Self {
            latitude,
            longitude,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.latitude.is_finite() && self.longitude.is_finite()
    }

    /// Rounds both coordinates to hundredths of a degree, half away from zero.
    /// Returned as integer hundredths so equal keys compare exactly.
    pub fn rounded_hundredths(&self) -> (i32, i32) {
        (
            round_hundredths(self.latitude),
            round_hundredths(self.longitude),
        )
    }
}

fn round_hundredths(v: f64) -> i32 {
    // f64::round rounds half away from zero; formatting first avoids
    // binary representation artefacts such as 146.405 * 100 = 14640.4999..
    let scaled: f64 = format!("{:.6}", v * 100.0).parse().unwrap_or(v * 100.0);
    scaled.round() as i32
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.4}, {:.4})", self.latitude, self.longitude)
    }
}

/// Coverage area of a data source, inclusive on all edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

impl BoundingBox {
    /// Mainland Australia and Tasmania.
    pub const AUSTRALIA: BoundingBox = BoundingBox {
        min_lat: -44.0,
        max_lat: -10.0,
        min_lon: 112.0,
        max_lon: 154.0,
    };

    pub fn contains(&self, point: &GeoPoint) -> bool {
        point.is_finite()
            && (self.min_lat..=self.max_lat).contains(&point.latitude)
            && (self.min_lon..=self.max_lon).contains(&point.longitude)
    }
}

impl Default for BoundingBox {
    fn default() -> Self {
        Self::AUSTRALIA
    }
}
