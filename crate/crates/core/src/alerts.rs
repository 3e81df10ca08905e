//! Temperature threshold alerts over the most recent days of data.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::record::DailyRecord;

pub const DEFAULT_ALERT_WINDOW_DAYS: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlertConfig {
    pub min_threshold: Option<f64>,
    pub max_threshold: Option<f64>,
    pub enabled: bool,
    pub window_days: u32,
}

impl Default for AlertConfig {
    fn default() -> Self {
        Self {
            min_threshold: None,
            max_threshold: None,
            enabled: false,
            window_days: DEFAULT_ALERT_WINDOW_DAYS,
        }
    }
}

impl AlertConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_days == 0 {
            return Err(CoreError::Domain("alert window must be at least one day".into()));
        }
        for t in [self.min_threshold, self.max_threshold].into_iter().flatten() {
            if !t.is_finite() {
                return Err(CoreError::Domain("alert thresholds must be finite".into()));
            }
        }
        if let (Some(lo), Some(hi)) = (self.min_threshold, self.max_threshold) {
            if lo >= hi {
                return Err(CoreError::Domain(format!(
                    "alert min threshold {lo} must be below max threshold {hi}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlertKind {
    BelowMin,
    AboveMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alert {
    pub kind: AlertKind,
    pub dates: Vec<NaiveDate>,
    /// Coldest offending minimum, or hottest offending maximum.
    pub observed_extreme: f64,
    pub threshold: f64,
}

/// Checks the trailing window of `records` (ascending by date) against the
/// configured thresholds. The window is anchored at the latest record with a
/// temperature, not at today's date. Equality with a threshold never alerts.
pub fn evaluate_alerts(records: &[DailyRecord], config: &AlertConfig) -> Vec<Alert> {
    if !config.enabled || config.window_days == 0 {
        return Vec::new();
    }
    let mut window: Vec<&DailyRecord> = records
        .iter()
        .rev()
        .filter(|r| r.has_temperature())
        .take(config.window_days as usize)
        .collect();
    window.reverse();

    let mut alerts = Vec::new();
    if let Some(threshold) = config.min_threshold {
        let offending: Vec<(NaiveDate, f64)> = window
            .iter()
            .filter_map(|r| r.t_min().filter(|t| *t < threshold).map(|t| (r.date, t)))
            .collect();
        if let Some(extreme) = offending.iter().map(|o| o.1).reduce(f64::min) {
            alerts.push(Alert {
                kind: AlertKind::BelowMin,
                dates: offending.iter().map(|o| o.0).collect(),
                observed_extreme: extreme,
                threshold,
            });
        }
    }
    if let Some(threshold) = config.max_threshold {
        let offending: Vec<(NaiveDate, f64)> = window
            .iter()
            .filter_map(|r| r.t_max().filter(|t| *t > threshold).map(|t| (r.date, t)))
            .collect();
        if let Some(extreme) = offending.iter().map(|o| o.1).reduce(f64::max) {
            alerts.push(Alert {
                kind: AlertKind::AboveMax,
                dates: offending.iter().map(|o| o.0).collect(),
                observed_extreme: extreme,
                threshold,
            });
        }
    }
    alerts
}
