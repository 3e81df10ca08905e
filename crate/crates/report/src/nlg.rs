//! Template-based chart summaries.
//!
//! Each summary is assembled from fixed sentence templates with named
//! placeholders. The default wording ships in `templates/`; a deployment can
//! replace any template by dropping a file of the same name in a directory
//! passed to [`Templates::load_dir`].

use agroweather_core::{
    AttributeId, ComparisonResult, DifferenceRuns, GeoPoint, SeasonSpec, SummaryStats,
};
use chrono::Days;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{ReportError, Result};
use crate::format::{long_date, one_decimal, two_decimals};

/// Placeholders a template may reference.
pub const PLACEHOLDERS: &[&str] = &[
    "attribute",
    "unit",
    "lat",
    "lon",
    "day_zero",
    "span",
    "min",
    "min_date",
    "max",
    "max_date",
    "mean",
    "trend",
    "reference",
    "days_above",
    "days_below",
    "longest_run",
    "run_direction",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    pub scope: String,
    pub extremes: String,
    pub trend: String,
    pub comparison: String,
    pub low_confidence: String,
}

impl Default for Templates {
    fn default() -> Self {
        Self {
            scope: include_str!("../templates/scope.txt").trim().to_string(),
            extremes: include_str!("../templates/extremes.txt").trim().to_string(),
            trend: include_str!("../templates/trend.txt").trim().to_string(),
            comparison: include_str!("../templates/comparison.txt").trim().to_string(),
            low_confidence: include_str!("../templates/low_confidence.txt").trim().to_string(),
        }
    }
}

impl Templates {
    /// Defaults, with any `<name>.txt` found in `dir` taking precedence.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut t = Templates::default();
        for (name, slot) in [
            ("scope", &mut t.scope),
            ("extremes", &mut t.extremes),
            ("trend", &mut t.trend),
            ("comparison", &mut t.comparison),
            ("low_confidence", &mut t.low_confidence),
        ] {
            let path = dir.join(format!("{name}.txt"));
            if path.exists() {
                *slot = std::fs::read_to_string(&path)
                    .map_err(|e| ReportError::Template(format!("{}: {e}", path.display())))?
                    .trim()
                    .to_string();
            }
        }
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for text in [&self.scope, &self.extremes, &self.trend, &self.comparison, &self.low_confidence] {
            for name in placeholders_in(text) {
                if !PLACEHOLDERS.contains(&name) {
                    return Err(ReportError::Template(format!("unknown placeholder {{{name}}}")));
                }
            }
        }
        Ok(())
    }
}

fn placeholders_in(text: &str) -> impl Iterator<Item = &str> {
    text.split('{').skip(1).filter_map(|s| s.split_once('}').map(|(name, _)| name))
}

fn fill(template: &str, values: &BTreeMap<&str, String>) -> String {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}').map(|close| (&after[..close], close)) {
            Some((name, close)) if values.contains_key(name) => {
                out.push_str(&values[name]);
                rest = &after[close + 1..];
            }
            _ => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlgSummary {
    pub attribute: AttributeId,
    pub sentences: Vec<String>,
    pub low_confidence: bool,
}

impl NlgSummary {
    pub fn text(&self) -> String {
        self.sentences.join(" ")
    }
}

/// Everything a summary is generated from.
#[derive(Debug, Clone, Copy)]
pub struct SummaryInput<'a> {
    pub attribute: AttributeId,
    /// Display name; defaults to the attribute's catalog name.
    pub display_name: Option<&'a str>,
    pub stats: &'a SummaryStats,
    pub comparison: Option<&'a ComparisonResult>,
    pub season: &'a SeasonSpec,
    pub point: GeoPoint,
    pub low_confidence: bool,
}

pub fn generate_summary(input: SummaryInput<'_>, templates: &Templates) -> NlgSummary {
    let stats = input.stats;
    let season = input.season;
    let date_at = |i: usize| long_date(season.day_zero + Days::new(i as u64));
    let name = input.display_name.unwrap_or(input.attribute.display_name());

    let mut v: BTreeMap<&str, String> = BTreeMap::new();
    v.insert("attribute", name.to_lowercase());
    v.insert("unit", input.attribute.unit().to_string());
    v.insert("lat", two_decimals(input.point.latitude));
    v.insert("lon", two_decimals(input.point.longitude));
    v.insert("day_zero", long_date(season.day_zero));
    v.insert("span", season.length_days.to_string());
    v.insert("min", one_decimal(stats.min_value));
    v.insert("min_date", date_at(stats.min_index));
    v.insert("max", one_decimal(stats.max_value));
    v.insert("max_date", date_at(stats.max_index));
    v.insert("mean", one_decimal(stats.mean));
    v.insert("trend", stats.trend.word().to_string());

    let mut sentences = vec![
        fill(&templates.scope, &v),
        fill(&templates.extremes, &v),
        fill(&templates.trend, &v),
    ];
    if let Some(cmp) = input.comparison {
        let runs = DifferenceRuns::of(&cmp.difference);
        let (longest, direction) = runs.longest();
        v.insert("reference", cmp.reference_kind.describe());
        v.insert("days_above", runs.days_above.to_string());
        v.insert("days_below", runs.days_below.to_string());
        v.insert("longest_run", longest.to_string());
        v.insert("run_direction", direction.as_str().to_string());
        sentences.push(fill(&templates.comparison, &v));
    }
    if input.low_confidence {
        sentences.push(fill(&templates.low_confidence, &v));
    }
    NlgSummary {
        attribute: input.attribute,
        sentences,
        low_confidence: input.low_confidence,
    }
}
