//! Per-day attribute series derived from a season.

use serde::{Deserialize, Serialize};

use crate::attribute::{AttributeId, FROST_THRESHOLD_C};
use crate::error::{CoreError, Result};
use crate::gdd::{self, GddMethod};
use crate::parallel;
use crate::record::{DailyRecord, Field};
use crate::season::SeasonSeries;
use crate::vpd;

/// Fraction of gap days above which a series is flagged low-confidence.
pub const LOW_CONFIDENCE_GAP_FRACTION: f64 = 0.10;

/// Values of one attribute indexed by day offset from day-zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedSeries {
    pub attribute: AttributeId,
    pub unit: String,
    pub values: Vec<Option<f64>>,
    /// Days whose inputs were missing.
    pub gap_days: usize,
    pub low_confidence: bool,
}

impl DerivedSeries {
    /// Pointwise series; gaps are the missing entries.
    pub fn new(attribute: AttributeId, values: Vec<Option<f64>>) -> Self {
        let values: Vec<Option<f64>> = values.into_iter().map(|v| v.filter(|x| x.is_finite())).collect();
        let gap_days = values.iter().filter(|v| v.is_none()).count();
        Self::with_gaps(attribute, values, gap_days)
    }

    pub fn with_gaps(attribute: AttributeId, values: Vec<Option<f64>>, gap_days: usize) -> Self {
        let low_confidence = is_low_confidence(gap_days, values.len());
        Self {
            attribute,
            unit: attribute.unit().to_string(),
            values,
            gap_days,
            low_confidence,
        }
    }

    /// Running sum of `increments`; missing increments add zero and count as gaps.
    pub fn cumulative(attribute: AttributeId, increments: &[Option<f64>]) -> Self {
        let mut total = 0.0;
        let mut gaps = 0;
        let values = increments
            .iter()
            .map(|inc| {
                match inc {
                    Some(v) => total += v,
                    None => gaps += 1,
                }
                Some(total)
            })
            .collect();
        Self::with_gaps(attribute, values, gaps)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn valid_count(&self) -> usize {
        self.values.iter().flatten().count()
    }

    /// Checks that `other` can be combined elementwise with `self`.
    pub fn check_compatible(&self, other: &DerivedSeries) -> Result<()> {
        if self.attribute != other.attribute {
            return Err(CoreError::MismatchedSeries {
                dimension: "attribute",
                detail: format!("{} vs {}", self.attribute, other.attribute),
            });
        }
        if self.unit != other.unit {
            return Err(CoreError::MismatchedSeries {
                dimension: "unit",
                detail: format!("{} vs {}", self.unit, other.unit),
            });
        }
        if self.len() != other.len() {
            return Err(CoreError::MismatchedSeries {
                dimension: "length",
                detail: format!("{} vs {}", self.len(), other.len()),
            });
        }
        Ok(())
    }
}

fn is_low_confidence(gap_days: usize, len: usize) -> bool {
    len > 0 && gap_days as f64 > LOW_CONFIDENCE_GAP_FRACTION * len as f64
}

fn pointwise(records: &[DailyRecord], f: impl Fn(&DailyRecord) -> Option<f64>) -> Vec<Option<f64>> {
    records.iter().map(f).collect()
}

fn both_temps(r: &DailyRecord) -> Option<(f64, f64)> {
    Some((r.t_max()?, r.t_min()?))
}

/// VPD for each day with all four inputs present.
pub fn vpd_values(records: &[DailyRecord]) -> Result<Vec<Option<f64>>> {
    records
        .iter()
        .map(|r| {
            match (
                r.t_max(),
                r.t_min(),
                r.get(Field::RhAtTmax),
                r.get(Field::RhAtTmin),
            ) {
                (Some(hi), Some(lo), Some(rh_hi), Some(rh_lo)) => vpd::vpd(hi, lo, rh_hi, rh_lo).map(Some),
                _ => Ok(None),
            }
        })
        .collect()
}

/// Computes one catalog attribute over a season.
pub fn derive_attribute(season: &SeasonSeries, attribute: AttributeId, method: GddMethod) -> Result<DerivedSeries> {
    let records = &season.records;
    if let Some(field) = attribute.raw_field() {
        return Ok(DerivedSeries::new(attribute, pointwise(records, |r| r.get(field))));
    }
    let series = match attribute {
        AttributeId::TMean => DerivedSeries::new(
            attribute,
            pointwise(records, |r| both_temps(r).map(|(hi, lo)| (hi + lo) / 2.0)),
        ),
        AttributeId::DiurnalRange => DerivedSeries::new(
            attribute,
            pointwise(records, |r| both_temps(r).map(|(hi, lo)| hi - lo)),
        ),
        AttributeId::RainCumulative => {
            DerivedSeries::cumulative(attribute, &pointwise(records, |r| r.get(Field::Rain)))
        }
        AttributeId::FrostDaysCumulative => DerivedSeries::cumulative(
            attribute,
            &pointwise(records, |r| {
                r.t_min().map(|t| if t < FROST_THRESHOLD_C { 1.0 } else { 0.0 })
            }),
        ),
        AttributeId::GddDaily => gdd::daily_gdd_series(season, method)?,
        AttributeId::GddCumulative => gdd::cumulative_gdd(season, method)?,
        AttributeId::Vpd => DerivedSeries::new(attribute, vpd_values(records)?),
        raw => unreachable!("{raw} handled as raw field"),
    };
    Ok(series)
}

/// Derives several attributes, in parallel when the `parallel` feature is on.
pub fn derive_attributes(
    season: &SeasonSeries,
    attributes: &[AttributeId],
    method: GddMethod,
) -> Result<Vec<DerivedSeries>> {
    parallel::map(attributes, |a| derive_attribute(season, *a, method))
        .into_iter()
        .collect()
}
