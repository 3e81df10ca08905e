//! Daily observations as published by a gridded weather archive.

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{CoreError, Result};

/// Measured quantities carried by a [`DailyRecord`], in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    TMax,
    TMin,
    Rain,
    Evaporation,
    Radiation,
    RhAtTmax,
    RhAtTmin,
    VapourPressure,
    Mslp,
    EtShortCrop,
    EtTallCrop,
}

impl Field {
    pub const COUNT: usize = 11;

    pub const ALL: [Field; Field::COUNT] = [
        Field::TMax,
        Field::TMin,
        Field::Rain,
        Field::Evaporation,
        Field::Radiation,
        Field::RhAtTmax,
        Field::RhAtTmin,
        Field::VapourPressure,
        Field::Mslp,
        Field::EtShortCrop,
        Field::EtTallCrop,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    /// Column name in the canonical CSV dialect.
    pub const fn column(self) -> &'static str {
        match self {
            Field::TMax => "t_max",
            Field::TMin => "t_min",
            Field::Rain => "rain",
            Field::Evaporation => "evaporation",
            Field::Radiation => "radiation",
            Field::RhAtTmax => "rh_at_tmax",
            Field::RhAtTmin => "rh_at_tmin",
            Field::VapourPressure => "vapour_pressure",
            Field::Mslp => "mslp",
            Field::EtShortCrop => "et_short_crop",
            Field::EtTallCrop => "et_tall_crop",
        }
    }

    pub const fn unit(self) -> &'static str {
        match self {
            Field::TMax | Field::TMin => "°C",
            Field::Rain | Field::Evaporation | Field::EtShortCrop | Field::EtTallCrop => "mm",
            Field::Radiation => "MJ/m²",
            Field::RhAtTmax | Field::RhAtTmin => "%",
            Field::VapourPressure | Field::Mslp => "hPa",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Per-field provenance. Source codes are kept verbatim since their scheme
/// is defined by the upstream archive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Quality {
    Source(String),
    #[default]
    Missing,
    /// Value was present upstream but failed validation and was dropped.
    Invalid,
}

impl Quality {
    pub fn as_str(&self) -> &str {
        match self {
            Quality::Source(code) => code,
            Quality::Missing => "missing",
            Quality::Invalid => "invalid",
        }
    }

    pub fn parse(text: &str) -> Self {
        match text {
            "missing" => Quality::Missing,
            "invalid" => Quality::Invalid,
            other => Quality::Source(other.to_string()),
        }
    }
}

/// One day of weather at a single coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyRecord {
    pub date: NaiveDate,
    values: [Option<f64>; Field::COUNT],
    quality: [Quality; Field::COUNT],
}

impl DailyRecord {
    /// A record with every field missing.
    pub fn empty(date: NaiveDate) -> Self {
        Self {
            date,
            values: [None; Field::COUNT],
            quality: Default::default(),
        }
    }

    pub fn get(&self, field: Field) -> Option<f64> {
        self.values[field.index()]
    }

    pub fn quality(&self, field: Field) -> &Quality {
        &self.quality[field.index()]
    }

    /// Sets a value. A `None` value forces the quality to [`Quality::Missing`].
    pub fn set(&mut self, field: Field, value: Option<f64>, quality: Quality) {
        let i = field.index();
        self.values[i] = value.filter(|v| v.is_finite());
        self.quality[i] = if self.values[i].is_some() {
            quality
        } else if quality == Quality::Invalid {
            Quality::Invalid
        } else {
            Quality::Missing
        };
    }

    pub fn with(mut self, field: Field, value: f64) -> Self {
        self.set(field, Some(value), Quality::Source(String::new()));
        self
    }

    /// Drops a value that failed validation.
    pub fn demote(&mut self, field: Field) {
        self.set(field, None, Quality::Invalid);
    }

    pub fn t_max(&self) -> Option<f64> {
        self.get(Field::TMax)
    }

    pub fn t_min(&self) -> Option<f64> {
        self.get(Field::TMin)
    }

    pub fn has_temperature(&self) -> bool {
        self.t_max().is_some() || self.t_min().is_some()
    }
}

/// Inclusive calendar-date window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if start > end {
            return Err(CoreError::Domain(format!(
                "date range start {start} is after end {end}"
            )));
        }
        Ok(Self { start, end })
    }

    /// Window of `days` consecutive dates beginning at `start`.
    pub fn starting_at(start: NaiveDate, days: u32) -> Result<Self> {
        if days == 0 {
            return Err(CoreError::Domain("date range must span at least one day".into()));
        }
        let end = start
            .checked_add_days(Days::new(u64::from(days) - 1))
            .ok_or_else(|| CoreError::Domain(format!("date overflow from {start}")))?;
        Ok(Self { start, end })
    }

    pub fn len_days(&self) -> usize {
        (self.end - self.start).num_days() as usize + 1
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        (self.start..=self.end).contains(&date)
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> {
        self.start.iter_days().take(self.len_days())
    }
}

impl fmt::Display for DateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn field_order_matches_index() {
        for (i, f) in Field::ALL.iter().enumerate() {
            assert_eq!(f.index(), i);
        }
    }

    #[test]
    fn missing_value_forces_missing_quality() {
        let mut r = DailyRecord::empty(d(2021, 1, 1));
        r.set(Field::Rain, None, Quality::Source("0".into()));
        assert_eq!(r.quality(Field::Rain), &Quality::Missing);
        r.set(Field::Rain, Some(f64::NAN), Quality::Source("0".into()));
        assert_eq!(r.get(Field::Rain), None);
        r.set(Field::Rain, Some(3.0), Quality::Source("25".into()));
        assert_eq!(r.quality(Field::Rain).as_str(), "25");
    }

    #[test]
    fn quality_text_round_trip() {
        for q in [Quality::Missing, Quality::Invalid, Quality::Source("25".into())] {
            assert_eq!(Quality::parse(q.as_str()), q);
        }
    }

    #[test]
    fn date_range_basics() {
        let r = DateRange::new(d(2021, 10, 1), d(2021, 10, 3)).unwrap();
        assert_eq!(r.len_days(), 3);
        assert_eq!(r.dates().last(), Some(d(2021, 10, 3)));
        assert!(DateRange::new(d(2021, 10, 2), d(2021, 10, 1)).is_err());
        assert_eq!(DateRange::starting_at(d(2020, 2, 28), 2).unwrap().end, d(2020, 2, 29));
        assert!(DateRange::starting_at(d(2020, 2, 28), 0).is_err());
    }
}
