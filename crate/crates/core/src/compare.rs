//! Current-season versus reference comparisons.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};
use crate::parallel;
use crate::series::DerivedSeries;

/// Number of prior seasons averaged by default.
pub const DEFAULT_REFERENCE_YEARS: u32 = 5;

/// What the current season is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceKind {
    /// The season whose day-zero falls in `year`.
    SingleSeason { year: i32 },
    /// Per-day mean of the `n_years` seasons preceding the current one.
    MeanOfLast { n_years: u32 },
}

impl Default for ReferenceKind {
    fn default() -> Self {
        ReferenceKind::MeanOfLast {
            n_years: DEFAULT_REFERENCE_YEARS,
        }
    }
}

impl ReferenceKind {
    /// Years back from the current season that feed this reference.
    pub fn years_back(&self, current_year: i32) -> Result<Vec<u32>> {
        match *self {
            ReferenceKind::SingleSeason { year } if year < current_year => {
                Ok(vec![(current_year - year) as u32])
            }
            ReferenceKind::SingleSeason { year } => Err(CoreError::Domain(format!(
                "reference season {year} is not before {current_year}"
            ))),
            ReferenceKind::MeanOfLast { n_years } if n_years >= 1 => Ok((1..=n_years).collect()),
            ReferenceKind::MeanOfLast { .. } => {
                Err(CoreError::Domain("reference mean needs at least one year".into()))
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ReferenceKind::SingleSeason { year } => format!("{year} season"),
            ReferenceKind::MeanOfLast { n_years: 1 } => "previous season".to_string(),
            ReferenceKind::MeanOfLast { n_years } => format!("previous {n_years}-year average"),
        }
    }
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKind::SingleSeason { year } => write!(f, "season:{year}"),
            ReferenceKind::MeanOfLast { n_years } => write!(f, "mean:{n_years}"),
        }
    }
}

impl FromStr for ReferenceKind {
    type Err = CoreError;

    /// Parses `mean:<n>` or `season:<year>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::Domain(format!("invalid reference `{s}`, expected mean:<n> or season:<year>"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "mean" => Ok(ReferenceKind::MeanOfLast {
                n_years: arg.parse().map_err(|_| bad())?,
            }),
            "season" => Ok(ReferenceKind::SingleSeason {
                year: arg.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub current: DerivedSeries,
    pub reference: DerivedSeries,
    /// Current minus reference.
    pub difference: DerivedSeries,
    pub reference_kind: ReferenceKind,
}

/// Per-day mean across seasons, skipping missing values. A day is missing
/// only when every season lacks it.
pub fn reference_series(seasons: &[DerivedSeries]) -> Result<DerivedSeries> {
    let (first, rest) = seasons.split_first().ok_or(CoreError::MismatchedSeries {
        dimension: "count",
        detail: "no seasons to average".into(),
    })?;
    for s in rest {
        first.check_compatible(s)?;
    }
    // Running mean, so that averaging identical values returns them unchanged.
    let values = parallel::map_range(first.len(), |i| {
        seasons
            .iter()
            .filter_map(|s| s.values[i])
            .enumerate()
            .fold(None, |mean: Option<f64>, (k, v)| {
                Some(match mean {
                    None => v,
                    Some(m) => m + (v - m) / (k + 1) as f64,
                })
            })
    });
    let mut out = DerivedSeries::new(first.attribute, values);
    out.unit.clone_from(&first.unit);
    Ok(out)
}

/// Elementwise `current - reference`.
pub fn difference_series(
    current: &DerivedSeries,
    reference: &DerivedSeries,
    reference_kind: ReferenceKind,
) -> Result<ComparisonResult> {
    current.check_compatible(reference)?;
    let values = current
        .values
        .iter()
        .zip(&reference.values)
        .map(|(c, r)| Some((*c)? - (*r)?))
        .collect();
    let mut difference = DerivedSeries::new(current.attribute, values);
    difference.unit.clone_from(&current.unit);
    Ok(ComparisonResult {
        current: current.clone(),
        reference: reference.clone(),
        difference,
        reference_kind,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunDirection {
    Above,
    Below,
}

impl RunDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            RunDirection::Above => "above",
            RunDirection::Below => "below",
        }
    }
}

/// Sign statistics of a difference series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceRuns {
    pub days_above: usize,
    pub days_below: usize,
    pub longest_above: usize,
    pub longest_below: usize,
}

impl DifferenceRuns {
    pub fn of(difference: &DerivedSeries) -> Self {
        let mut runs = DifferenceRuns {
            days_above: 0,
            days_below: 0,
            longest_above: 0,
            longest_below: 0,
        };
        let (mut above, mut below) = (0usize, 0usize);
        for v in &difference.values {
            match v {
                Some(x) if *x > 0.0 => {
                    runs.days_above += 1;
                    above += 1;
                    below = 0;
                }
                Some(x) if *x < 0.0 => {
                    runs.days_below += 1;
                    below += 1;
                    above = 0;
                }
                _ => {
                    above = 0;
                    below = 0;
                }
            }
            runs.longest_above = runs.longest_above.max(above);
            runs.longest_below = runs.longest_below.max(below);
        }
        runs
    }

    /// The longer of the two runs; ties go to below-reference.
    pub fn longest(&self) -> (usize, RunDirection) {
        if self.longest_above > self.longest_below {
            (self.longest_above, RunDirection::Above)
        } else {
            (self.longest_below, RunDirection::Below)
        }
    }
}
