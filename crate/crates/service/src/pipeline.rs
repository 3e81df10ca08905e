//! Fetch, derive, compare and summarise: the work behind `/series` and
//! `/report`.

use agroweather_core::{
    derive_attributes, difference_series, evaluate_alerts, parallel, reference_series, slice_season, summary_stats,
    Alert, AlertConfig, AttributeCatalog, AttributeId, ComparisonResult, DailyRecord, DerivedSeries,
    DifferenceRuns, GddMethod, GeoPoint, ReferenceKind, SeasonSpec, SummaryStats,
};
use agroweather_datasource::{Clock, DataSource, DiskCache, FetchedSeries, FixtureSource, HttpSource, HttpSourceConfig, WeatherClient};
use agroweather_report::{
    compose_pdf, generate_summary, render_chart, ChartInput, NlgSummary, PageLayout, ReportSpec, SummaryInput,
    Templates, DEFAULT_ATTRIBUTION,
};
use chrono::{DateTime, Datelike, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

use crate::config::ServiceConfig;
use crate::error::{ApiError, Violation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRequest {
    pub point: GeoPoint,
    pub day_zero: NaiveDate,
    pub length_days: u32,
    pub attributes: Vec<AttributeId>,
    pub comparison: bool,
    pub reference: ReferenceKind,
    pub t_base: f64,
    pub gdd_method: GddMethod,
    pub alerts: AlertConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeResult {
    pub attribute: AttributeId,
    pub name: String,
    pub unit: String,
    pub current: Vec<Option<f64>>,
    pub reference: Option<Vec<Option<f64>>>,
    pub difference: Option<Vec<Option<f64>>>,
    pub gap_days: usize,
    pub low_confidence: bool,
    /// Absent when every day is missing.
    pub stats: Option<SummaryStats>,
    pub runs: Option<DifferenceRuns>,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FetchInfo {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub fetched_at: DateTime<Utc>,
    pub cache_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Fetch time of the current season's data.
    pub fetched_at: DateTime<Utc>,
    /// True when every season came from the cache.
    pub cache_hit: bool,
    /// Current season first, then each reference season.
    pub fetches: Vec<FetchInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInfo {
    #[serde(flatten)]
    pub kind: ReferenceKind,
    pub label: String,
    pub day_zeros: Vec<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResponse {
    pub point: GeoPoint,
    pub season: SeasonSpec,
    pub gdd_method: GddMethod,
    pub dates: Vec<NaiveDate>,
    pub reference: Option<ReferenceInfo>,
    pub attributes: Vec<AttributeResult>,
    pub alerts: Vec<Alert>,
    pub provenance: Provenance,
}

/// Per-attribute output of one analysis run.
struct Derived {
    attribute: AttributeId,
    current: DerivedSeries,
    comparison: Option<ComparisonResult>,
}

struct Analysis {
    season: SeasonSpec,
    reference_specs: Vec<SeasonSpec>,
    current_records: Arc<Vec<DailyRecord>>,
    fetches: Vec<FetchedSeries>,
    derived: Vec<Derived>,
}

/// Builds the upstream source a config describes.
pub fn source_from_config(config: &ServiceConfig) -> Arc<dyn DataSource> {
    let s = &config.source;
    match (&s.fixture_dir, &s.base_url) {
        (Some(dir), _) => Arc::new(FixtureSource::new(dir).with_last_published(s.last_published)),
        (None, Some(url)) => Arc::new(HttpSource::new(http_config(config, url))),
        (None, None) => unreachable!("validated config has a source"),
    }
}

pub fn http_config(config: &ServiceConfig, url: &str) -> HttpSourceConfig {
    let s = &config.source;
    let mut http = HttpSourceConfig::new(url);
    http.identification = s.identification_param.clone().zip(s.identification_value.clone());
    http.timeout = std::time::Duration::from_secs(s.timeout_secs);
    http.last_published = s.last_published;
    http
}

pub fn client_from_config(config: &ServiceConfig, source: Arc<dyn DataSource>, clock: Arc<dyn Clock>) -> WeatherClient {
    let ttl = Duration::milliseconds((config.cache.ttl_hours * 3_600_000.0).round() as i64);
    let cache = DiskCache::new(&config.cache.dir, ttl, clock.clone());
    WeatherClient::new(source, cache, (&config.bounds).into(), clock)
}

/// Everything needed to answer analysis requests.
pub struct Analyzer {
    client: WeatherClient,
    catalog: AttributeCatalog,
    templates: Templates,
    config: ServiceConfig,
}

impl Analyzer {
    pub fn new(config: ServiceConfig, client: WeatherClient) -> Result<Self, ApiError> {
        let catalog = config.catalog().map_err(ApiError::internal)?;
        let templates = match &config.analysis.templates_dir {
            Some(dir) => Templates::load_dir(dir)?,
            None => Templates::default(),
        };
        Ok(Self {
            client,
            catalog,
            templates,
            config,
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn catalog(&self) -> &AttributeCatalog {
        &self.catalog
    }

    pub fn client(&self) -> &WeatherClient {
        &self.client
    }

    fn display_name(&self, id: AttributeId) -> &str {
        self.catalog.get(id).map(|e| e.name.as_str()).unwrap_or(id.display_name())
    }

    /// Parses `/series` query parameters, filling gaps from config defaults.
    /// Every problem found is reported, not just the first.
    pub fn parse_series_query(&self, params: &[(String, String)]) -> Result<SeriesRequest, ApiError> {
        let get = |name: &str| params.iter().rev().find(|(k, _)| k == name).map(|(_, v)| v.trim());
        let mut problems = Vec::new();
        let mut number = |name: &str, required: bool| -> Option<f64> {
            match get(name) {
                None if required => {
                    problems.push(Violation::new(name, "is required"));
                    None
                }
                None | Some("") => None,
                Some(raw) => match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Some(v),
                    _ => {
                        problems.push(Violation::new(name, format!("`{raw}` is not a finite number")));
                        None
                    }
                },
            }
        };
        let lat = number("lat", true);
        let lon = number("lon", true);
        let t_base = number("t_base", false).unwrap_or(self.config.analysis.t_base);
        let alert_min = number("alert_min", false);
        let alert_max = number("alert_max", false);

        if lat.is_some_and(|v| !(-90.0..=90.0).contains(&v)) {
            problems.push(Violation::new("lat", "must be within -90..=90"));
        }
        if lon.is_some_and(|v| !(-180.0..=180.0).contains(&v)) {
            problems.push(Violation::new("lon", "must be within -180..=180"));
        }

        let day_zero = match get("day_zero") {
            None => {
                problems.push(Violation::new("day_zero", "is required"));
                None
            }
            Some(raw) => match raw.parse::<NaiveDate>() {
                Ok(d) => Some(d),
                Err(_) => {
                    problems.push(Violation::new("day_zero", format!("`{raw}` is not a YYYY-MM-DD date")));
                    None
                }
            },
        };
        let length_days = match get("length_days") {
            None => Some(self.config.analysis.length_days),
            Some(raw) => match raw.parse::<u32>() {
                Ok(n) if (1..=366).contains(&n) => Some(n),
                _ => {
                    problems.push(Violation::new("length_days", format!("`{raw}` must be an integer in 1..=366")));
                    None
                }
            },
        };
        let mut flag = |name: &str, default: bool| match get(name) {
            None => default,
            Some("true" | "1" | "yes" | "on") => true,
            Some("false" | "0" | "no" | "off") => false,
            Some(raw) => {
                problems.push(Violation::new(name, format!("`{raw}` is not a boolean")));
                default
            }
        };
        let comparison = flag("comparison", false);
        let alerts_enabled = flag("alerts", self.config.alerts.enabled || alert_min.is_some() || alert_max.is_some());

        let reference = match get("reference") {
            None | Some("") => self.config.default_reference(),
            Some(raw) => raw.parse().unwrap_or_else(|e: agroweather_core::CoreError| {
                problems.push(Violation::new("reference", e.to_string()));
                self.config.default_reference()
            }),
        };
        let gdd_method = match get("gdd_method") {
            None | Some("") => self.config.analysis.gdd_method,
            Some(raw) => raw.parse().unwrap_or_else(|e: agroweather_core::CoreError| {
                problems.push(Violation::new("gdd_method", e.to_string()));
                self.config.analysis.gdd_method
            }),
        };
        let window_days = match get("alert_window") {
            None => self.config.alerts.window_days,
            Some(raw) => raw.parse::<u32>().ok().filter(|n| *n >= 1).unwrap_or_else(|| {
                problems.push(Violation::new("alert_window", format!("`{raw}` must be a positive integer")));
                self.config.alerts.window_days
            }),
        };

        let attributes: Vec<AttributeId> = match get("attributes") {
            None | Some("") => self.catalog.entries().iter().map(|e| e.id).collect(),
            Some(raw) => raw.split(',').map(str::trim).filter(|s| !s.is_empty()).filter_map(|code| {
                match code.parse::<AttributeId>() {
                    Ok(id) => Some(id),
                    Err(_) => {
                        problems.push(Violation::new("attributes", format!("unknown attribute `{code}`")));
                        None
                    }
                }
            }).collect(),
        };
        problems.extend(self.check_attributes(&attributes));

        let alerts = AlertConfig {
            min_threshold: alert_min.or(self.config.alerts.min_threshold),
            max_threshold: alert_max.or(self.config.alerts.max_threshold),
            enabled: alerts_enabled,
            window_days,
        };
        if let Err(e) = alerts.validate() {
            problems.push(Violation::new("alerts", e.to_string()));
        }
        if comparison {
            if let Some(d) = day_zero {
                if let Err(e) = reference.years_back(d.year()) {
                    problems.push(Violation::new("reference", e.to_string()));
                }
            }
        }

        match (lat, lon, day_zero, length_days) {
            (Some(lat), Some(lon), Some(day_zero), Some(length_days)) if problems.is_empty() => Ok(SeriesRequest {
                point: GeoPoint::new(lat, lon),
                day_zero,
                length_days,
                attributes,
                comparison,
                reference,
                t_base,
                gdd_method,
                alerts,
            }),
            _ => Err(ApiError::invalid(problems)),
        }
    }

    fn check_attributes(&self, attributes: &[AttributeId]) -> Vec<Violation> {
        let mut problems = Vec::new();
        if attributes.is_empty() {
            problems.push(Violation::new("attributes", "at least one attribute is required"));
        }
        let mut seen = HashSet::new();
        for a in attributes {
            if self.catalog.get(*a).is_none() {
                problems.push(Violation::new("attributes", format!("{} is not offered by this service", a.code())));
            }
            if !seen.insert(*a) {
                problems.push(Violation::new("attributes", format!("{} is listed twice", a.code())));
            }
        }
        problems
    }

    fn analyze(
        &self,
        point: GeoPoint,
        season: SeasonSpec,
        attributes: &[AttributeId],
        comparison: Option<ReferenceKind>,
        method: GddMethod,
    ) -> Result<Analysis, ApiError> {
        season.validate()?;
        let mut specs = vec![season];
        if let Some(kind) = comparison {
            for years in kind.years_back(season.day_zero.year())? {
                specs.push(season.shifted_back(years)?);
            }
        }
        let fetches = parallel::map(&specs, |s| self.client.fetch_daily_series(point, s.range()))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let per_season = parallel::map_range(specs.len(), |i| {
            let sliced = slice_season(&fetches[i].records, specs[i], point)?;
            derive_attributes(&sliced, attributes, method)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

        let mut derived = Vec::with_capacity(attributes.len());
        for (k, &attribute) in attributes.iter().enumerate() {
            let current = per_season[0][k].clone();
            let comparison = match comparison {
                Some(kind) => {
                    let refs: Vec<DerivedSeries> = per_season[1..].iter().map(|s| s[k].clone()).collect();
                    let reference = reference_series(&refs)?;
                    Some(difference_series(&current, &reference, kind)?)
                }
                None => None,
            };
            derived.push(Derived {
                attribute,
                current,
                comparison,
            });
        }
        Ok(Analysis {
            season,
            reference_specs: specs[1..].to_vec(),
            current_records: fetches[0].records.clone(),
            fetches,
            derived,
        })
    }

    fn summary(&self, point: GeoPoint, season: &SeasonSpec, d: &Derived, stats: &SummaryStats) -> NlgSummary {
        generate_summary(
            SummaryInput {
                attribute: d.attribute,
                display_name: Some(self.display_name(d.attribute)),
                stats,
                comparison: d.comparison.as_ref(),
                season,
                point,
                low_confidence: d.current.low_confidence,
            },
            &self.templates,
        )
    }

    pub fn series(&self, req: &SeriesRequest) -> Result<SeriesResponse, ApiError> {
        let problems = self.check_attributes(&req.attributes);
        if !problems.is_empty() {
            return Err(ApiError::invalid(problems));
        }
        let season = SeasonSpec::new(req.day_zero, req.length_days, req.t_base)?;
        let analysis = self.analyze(
            req.point,
            season,
            &req.attributes,
            req.comparison.then_some(req.reference),
            req.gdd_method,
        )?;

        let attributes = analysis
            .derived
            .iter()
            .map(|d| {
                let stats = summary_stats(&d.current).ok();
                let sentences = stats
                    .as_ref()
                    .map(|s| self.summary(req.point, &season, d, s).sentences)
                    .unwrap_or_default();
                let info = self.catalog.get(d.attribute);
                AttributeResult {
                    attribute: d.attribute,
                    name: self.display_name(d.attribute).to_string(),
                    unit: info.map(|i| i.unit.clone()).unwrap_or_else(|| d.current.unit.clone()),
                    current: d.current.values.clone(),
                    reference: d.comparison.as_ref().map(|c| c.reference.values.clone()),
                    difference: d.comparison.as_ref().map(|c| c.difference.values.clone()),
                    gap_days: d.current.gap_days,
                    low_confidence: d.current.low_confidence,
                    stats,
                    runs: d.comparison.as_ref().map(|c| DifferenceRuns::of(&c.difference)),
                    sentences,
                }
            })
            .collect();

        Ok(SeriesResponse {
            point: req.point,
            season,
            gdd_method: req.gdd_method,
            dates: season.range().dates().collect(),
            reference: req.comparison.then(|| ReferenceInfo {
                kind: req.reference,
                label: req.reference.describe(),
                day_zeros: analysis.reference_specs.iter().map(|s| s.day_zero).collect(),
            }),
            attributes,
            alerts: evaluate_alerts(&analysis.current_records, &req.alerts),
            provenance: provenance(self.client.source_id(), &analysis),
        })
    }

    pub fn data_attribution(&self) -> String {
        self.config
            .analysis
            .attribution
            .clone()
            .unwrap_or_else(|| DEFAULT_ATTRIBUTION.to_string())
    }

    /// Fills in the configured attribution when the spec has none.
    pub fn complete_spec(&self, spec: &ReportSpec) -> ReportSpec {
        let mut spec = spec.clone();
        if spec.attribution.is_none() {
            spec.attribution = Some(self.data_attribution());
        }
        spec
    }

    pub fn report(&self, spec: &ReportSpec) -> Result<Vec<u8>, ApiError> {
        spec.validate()?;
        let problems = self.check_attributes(&spec.attributes);
        if !problems.is_empty() {
            return Err(ApiError::invalid(problems));
        }
        let spec = self.complete_spec(spec);
        let analysis = self.analyze(
            spec.point,
            spec.season,
            &spec.attributes,
            spec.comparison.then_some(spec.reference),
            self.config.analysis.gdd_method,
        )?;
        let style = PageLayout::default().chart_style(spec.difference);
        let mut charts = Vec::with_capacity(analysis.derived.len());
        let mut summaries = Vec::with_capacity(analysis.derived.len());
        for d in &analysis.derived {
            let stats = summary_stats(&d.current).map_err(|_| {
                ApiError::from(agroweather_core::CoreError::EmptySeries).with_detail("attribute", d.attribute.code())
            })?;
            let input = match &d.comparison {
                Some(c) => ChartInput::Comparison(c),
                None => ChartInput::Series(&d.current),
            };
            let mut chart_style = style.clone();
            chart_style.title = Some(format!("{} ({})", self.display_name(d.attribute), d.current.unit));
            charts.push(render_chart(input, &chart_style)?);
            summaries.push(self.summary(spec.point, &analysis.season, d, &stats));
        }
        Ok(compose_pdf(&spec, &charts, &summaries)?)
    }
}

fn provenance(source: &str, analysis: &Analysis) -> Provenance {
    let fetches: Vec<FetchInfo> = analysis
        .fetches
        .iter()
        .zip(std::iter::once(&analysis.season).chain(&analysis.reference_specs))
        .map(|(f, s)| FetchInfo {
            start: s.day_zero,
            end: s.last_day(),
            fetched_at: f.fetched_at,
            cache_hit: f.cache_hit,
        })
        .collect();
    Provenance {
        source: source.to_string(),
        fetched_at: fetches[0].fetched_at,
        cache_hit: fetches.iter().all(|f| f.cache_hit),
        fetches,
    }
}
