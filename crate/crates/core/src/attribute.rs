//! The chartable attribute catalog.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};
use crate::record::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AttributeId {
    TMax,
    TMin,
    TMean,
    DiurnalRange,
    Rain,
    RainCumulative,
    Evaporation,
    Radiation,
    RhAtTmax,
    RhAtTmin,
    VapourPressure,
    Mslp,
    EtShortCrop,
    EtTallCrop,
    GddDaily,
    GddCumulative,
    Vpd,
    FrostDaysCumulative,
}

/// Days with a minimum temperature strictly below this count as frost days.
pub const FROST_THRESHOLD_C: f64 = 2.0;

impl AttributeId {
    pub const ALL: [AttributeId; 18] = [
        AttributeId::TMax,
        AttributeId::TMin,
        AttributeId::TMean,
        AttributeId::DiurnalRange,
        AttributeId::Rain,
        AttributeId::RainCumulative,
        AttributeId::Evaporation,
        AttributeId::Radiation,
        AttributeId::RhAtTmax,
        AttributeId::RhAtTmin,
        AttributeId::VapourPressure,
        AttributeId::Mslp,
        AttributeId::EtShortCrop,
        AttributeId::EtTallCrop,
        AttributeId::GddDaily,
        AttributeId::GddCumulative,
        AttributeId::Vpd,
        AttributeId::FrostDaysCumulative,
    ];

    pub const fn code(self) -> &'static str {
        match self {
            AttributeId::TMax => "T_MAX",
            AttributeId::TMin => "T_MIN",
            AttributeId::TMean => "T_MEAN",
            AttributeId::DiurnalRange => "DIURNAL_RANGE",
            AttributeId::Rain => "RAIN",
            AttributeId::RainCumulative => "RAIN_CUMULATIVE",
            AttributeId::Evaporation => "EVAPORATION",
            AttributeId::Radiation => "RADIATION",
            AttributeId::RhAtTmax => "RH_AT_TMAX",
            AttributeId::RhAtTmin => "RH_AT_TMIN",
            AttributeId::VapourPressure => "VAPOUR_PRESSURE",
            AttributeId::Mslp => "MSLP",
            AttributeId::EtShortCrop => "ET_SHORT_CROP",
            AttributeId::EtTallCrop => "ET_TALL_CROP",
            AttributeId::GddDaily => "GDD_DAILY",
            AttributeId::GddCumulative => "GDD_CUMULATIVE",
            AttributeId::Vpd => "VPD",
            AttributeId::FrostDaysCumulative => "FROST_DAYS_CUMULATIVE",
        }
    }

    pub const fn display_name(self) -> &'static str {
        match self {
            AttributeId::TMax => "Maximum temperature",
            AttributeId::TMin => "Minimum temperature",
            AttributeId::TMean => "Mean temperature",
            AttributeId::DiurnalRange => "Diurnal temperature range",
            AttributeId::Rain => "Daily rainfall",
            AttributeId::RainCumulative => "Cumulative rainfall",
            AttributeId::Evaporation => "Pan evaporation",
            AttributeId::Radiation => "Solar radiation",
            AttributeId::RhAtTmax => "Relative humidity at maximum temperature",
            AttributeId::RhAtTmin => "Relative humidity at minimum temperature",
            AttributeId::VapourPressure => "Vapour pressure",
            AttributeId::Mslp => "Mean sea-level pressure",
            AttributeId::EtShortCrop => "Short-crop evapotranspiration",
            AttributeId::EtTallCrop => "Tall-crop evapotranspiration",
            AttributeId::GddDaily => "Daily growing-degree days",
            AttributeId::GddCumulative => "Cumulative growing-degree days",
            AttributeId::Vpd => "Vapour-pressure deficit",
            AttributeId::FrostDaysCumulative => "Cumulative frost days",
        }
    }

    pub const fn unit(self) -> &'static str {
        match self {
            AttributeId::TMax | AttributeId::TMin | AttributeId::TMean | AttributeId::DiurnalRange => "°C",
            AttributeId::Rain
            | AttributeId::RainCumulative
            | AttributeId::Evaporation
            | AttributeId::EtShortCrop
            | AttributeId::EtTallCrop => "mm",
            AttributeId::Radiation => "MJ/m²",
            AttributeId::RhAtTmax | AttributeId::RhAtTmin => "%",
            AttributeId::VapourPressure | AttributeId::Mslp => "hPa",
            AttributeId::GddDaily | AttributeId::GddCumulative => "°C·day",
            AttributeId::Vpd => "kPa",
            AttributeId::FrostDaysCumulative => "days",
        }
    }

    /// The record field copied through unchanged, for raw attributes.
    pub const fn raw_field(self) -> Option<Field> {
        match self {
            AttributeId::TMax => Some(Field::TMax),
            AttributeId::TMin => Some(Field::TMin),
            AttributeId::Rain => Some(Field::Rain),
            AttributeId::Evaporation => Some(Field::Evaporation),
            AttributeId::Radiation => Some(Field::Radiation),
            AttributeId::RhAtTmax => Some(Field::RhAtTmax),
            AttributeId::RhAtTmin => Some(Field::RhAtTmin),
            AttributeId::VapourPressure => Some(Field::VapourPressure),
            AttributeId::Mslp => Some(Field::Mslp),
            AttributeId::EtShortCrop => Some(Field::EtShortCrop),
            AttributeId::EtTallCrop => Some(Field::EtTallCrop),
            _ => None,
        }
    }

    pub const fn is_cumulative(self) -> bool {
        matches!(
            self,
            AttributeId::RainCumulative | AttributeId::GddCumulative | AttributeId::FrostDaysCumulative
        )
    }
}

impl fmt::Display for AttributeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for AttributeId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase();
        AttributeId::ALL
            .into_iter()
            .find(|a| a.code() == wanted)
            .ok_or_else(|| CoreError::UnknownAttribute(s.to_string()))
    }
}

/// A catalog entry as presented to clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeInfo {
    pub id: AttributeId,
    pub name: String,
    pub unit: String,
}

impl From<AttributeId> for AttributeInfo {
    fn from(id: AttributeId) -> Self {
        Self {
            id,
            name: id.display_name().to_string(),
            unit: id.unit().to_string(),
        }
    }
}

/// The set of attributes a deployment offers, in presentation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeCatalog {
    entries: Vec<AttributeInfo>,
}

impl AttributeCatalog {
    pub fn new(entries: Vec<AttributeInfo>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::Domain("attribute catalog is empty".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|p| p.id == e.id) {
                return Err(CoreError::Domain(format!("duplicate catalog entry {}", e.id)));
            }
            if e.name.trim().is_empty() || e.unit.trim().is_empty() {
                return Err(CoreError::Domain(format!("catalog entry {} lacks a name or unit", e.id)));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[AttributeInfo] {
        &self.entries
    }

    pub fn get(&self, id: AttributeId) -> Option<&AttributeInfo> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for AttributeCatalog {
    fn default() -> Self {
        Self {
            entries: AttributeId::ALL.into_iter().map(AttributeInfo::from).collect(),
        }
    }
}
