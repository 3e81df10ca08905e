//! Growing-degree days.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::attribute::AttributeId;
use crate::error::{CoreError, Result};
use crate::season::SeasonSeries;
use crate::series::DerivedSeries;

/// How a day that averages below the base temperature is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GddMethod {
    /// Compute the mean-minus-base value, then floor it at zero.
    #[default]
    ClampResult,
    /// Raise each of `t_max` and `t_min` to the base before averaging.
    ClampComponents,
}

impl GddMethod {
    pub const fn as_str(self) -> &'static str {
        match self {
            GddMethod::ClampResult => "clamp_result",
            GddMethod::ClampComponents => "clamp_components",
        }
    }
}

impl fmt::Display for GddMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GddMethod {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clamp_result" => Ok(GddMethod::ClampResult),
            "clamp_components" => Ok(GddMethod::ClampComponents),
            other => Err(CoreError::Domain(format!("unknown GDD method `{other}`"))),
        }
    }
}

/// Degree-days accumulated on one day.
pub fn daily_gdd(t_max: f64, t_min: f64, t_base: f64, method: GddMethod) -> Result<f64> {
    if !(t_max.is_finite() && t_min.is_finite() && t_base.is_finite()) {
        return Err(CoreError::Domain(format!(
            "non-finite GDD input (t_max {t_max}, t_min {t_min}, t_base {t_base})"
        )));
    }
    if t_max < t_min {
        return Err(CoreError::Domain(format!(
            "t_max {t_max} is below t_min {t_min}"
        )));
    }
    let gdd = match method {
        GddMethod::ClampResult => ((t_max + t_min) / 2.0 - t_base).max(0.0),
        GddMethod::ClampComponents => (t_max.max(t_base) + t_min.max(t_base)) / 2.0 - t_base,
    };
    Ok(gdd)
}

/// Per-day GDD; days missing either temperature are missing.
pub fn daily_gdd_series(season: &SeasonSeries, method: GddMethod) -> Result<DerivedSeries> {
    let t_base = season.spec.t_base;
    let values = season
        .records
        .iter()
        .map(|r| match (r.t_max(), r.t_min()) {
            (Some(hi), Some(lo)) => daily_gdd(hi, lo, t_base, method).map(Some),
            _ => Ok(None),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivedSeries::new(AttributeId::GddDaily, values))
}

/// Running GDD total from day-zero. Days without both temperatures add
/// nothing and are counted as gaps.
pub fn cumulative_gdd(season: &SeasonSeries, method: GddMethod) -> Result<DerivedSeries> {
    let daily = daily_gdd_series(season, method)?;
    Ok(DerivedSeries::cumulative(AttributeId::GddCumulative, &daily.values))
}
