//! Day-zero anchored growing seasons.

use chrono::{Datelike, Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::geo::GeoPoint;
use crate::record::{DailyRecord, DateRange};

pub const MAX_SEASON_DAYS: u32 = 366;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeasonSpec {
    pub day_zero: NaiveDate,
    pub length_days: u32,
    /// Base temperature for degree-day accumulation, °C.
    pub t_base: f64,
}

impl SeasonSpec {
    pub fn new(day_zero: NaiveDate, length_days: u32, t_base: f64) -> Result<Self> {
        let spec = Self {
            day_zero,
            length_days,
            t_base,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SEASON_DAYS).contains(&self.length_days) {
            return Err(CoreError::InvalidSpec(format!(
                "length_days must be within 1..={MAX_SEASON_DAYS}, got {}",
                self.length_days
            )));
        }
        if !self.t_base.is_finite() {
            return Err(CoreError::InvalidSpec("t_base must be finite".into()));
        }
        Ok(())
    }

    pub fn range(&self) -> DateRange {
        // length_days >= 1 is enforced at construction
        DateRange::starting_at(self.day_zero, self.length_days).expect("validated season spec")
    }

    pub fn last_day(&self) -> NaiveDate {
        self.range().end
    }

    /// The same season `years` calendar years earlier. A 29 February day-zero
    /// lands on 28 February in non-leap years.
    pub fn shifted_back(&self, years: u32) -> Result<Self> {
        Ok(Self {
            day_zero: shift_years_back(self.day_zero, years)?,
            ..*self
        })
    }
}

pub fn shift_years_back(date: NaiveDate, years: u32) -> Result<NaiveDate> {
    let year = date.year() - years as i32;
    NaiveDate::from_ymd_opt(year, date.month(), date.day())
        .or_else(|| NaiveDate::from_ymd_opt(year, date.month(), date.day() - 1))
        .ok_or_else(|| CoreError::Domain(format!("cannot shift {date} back {years} years")))
}

/// Consecutive daily records where index `n` holds day-zero + `n` days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonSeries {
    pub spec: SeasonSpec,
    pub point: GeoPoint,
    pub records: Vec<DailyRecord>,
}

impl SeasonSeries {
    /// Extracts the spec's window from records sorted by date.
    pub fn from_records(spec: SeasonSpec, point: GeoPoint, records: &[DailyRecord]) -> Result<Self> {
        slice_season(records, spec, point)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.spec.day_zero + Days::new(index as u64)
    }
}

/// Extracts exactly `spec.length_days` records starting at day-zero.
///
/// `records` must be in ascending date order; records outside the window are
/// ignored. Any absent date in the window is reported.
pub fn slice_season(records: &[DailyRecord], spec: SeasonSpec, point: GeoPoint) -> Result<SeasonSeries> {
    spec.validate()?;
    let range = spec.range();
    let first = records.partition_point(|r| r.date < range.start);
    let mut window = Vec::with_capacity(spec.length_days as usize);
    let mut missing = Vec::new();
    let mut cursor = records[first..].iter().peekable();
    for date in range.dates() {
        while cursor.peek().is_some_and(|r| r.date < date) {
            cursor.next();
        }
        match cursor.peek() {
            Some(r) if r.date == date => {
                window.push((*r).clone());
                cursor.next();
            }
            _ => missing.push(date),
        }
    }
    if !missing.is_empty() {
        return Err(CoreError::InsufficientData { missing });
    }
    Ok(SeasonSeries {
        spec,
        point,
        records: window,
    })
}
