//! Descriptive statistics over a derived series.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::series::DerivedSeries;

/// A trend is steady while the fitted change over the whole series stays
/// under this fraction of the observed range.
pub const STEADY_RANGE_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trend {
    Rising,
    Falling,
    Steady,
}

impl Trend {
    pub fn word(self) -> &'static str {
        match self {
            Trend::Rising => "rising",
            Trend::Falling => "falling",
            Trend::Steady => "steady",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub min_value: f64,
    pub min_index: usize,
    pub max_value: f64,
    pub max_index: usize,
    pub mean: f64,
    pub last_value: f64,
    pub trend: Trend,
    /// Least-squares slope of value against day index, in unit per day.
    pub slope: f64,
    pub valid_count: usize,
}

pub fn summary_stats(series: &DerivedSeries) -> Result<SummaryStats> {
    let points: Vec<(usize, f64)> = series
        .values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    let &(first_index, first_value) = points.first().ok_or(CoreError::EmptySeries)?;

    let (mut min_index, mut min_value) = (first_index, first_value);
    let (mut max_index, mut max_value) = (first_index, first_value);
    for &(i, v) in &points[1..] {
        // strict comparisons keep the earliest index on ties
        if v < min_value {
            (min_index, min_value) = (i, v);
        }
        if v > max_value {
            (max_index, max_value) = (i, v);
        }
    }

    let n = points.len() as f64;
    let mean = (points.iter().map(|p| p.1).sum::<f64>() / n).clamp(min_value, max_value);
    let x_mean = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(i, v)| {
        let dx = i as f64 - x_mean;
        (num + dx * (v - mean), den + dx * dx)
    });
    let slope = if den > 0.0 { num / den } else { 0.0 };

    let range = max_value - min_value;
    let fitted_change = slope.abs() * series.len() as f64;
    let trend = if range == 0.0 || fitted_change < STEADY_RANGE_FRACTION * range {
        Trend::Steady
    } else if slope > 0.0 {
        Trend::Rising
    } else {
        Trend::Falling
    };

    Ok(SummaryStats {
        min_value,
        min_index,
        max_value,
        max_index,
        mean,
        last_value: points.last().map(|p| p.1).unwrap_or(first_value),
        trend,
        slope,
        valid_count: points.len(),
    })
}
