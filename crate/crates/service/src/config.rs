//! Service configuration: a TOML file plus `AGROWEATHER_<SECTION>_<KEY>`
//! environment overrides.

use agroweather_core::{
    AlertConfig, AttributeCatalog, AttributeId, AttributeInfo, BoundingBox, GddMethod, ReferenceKind, DEFAULT_T_BASE,
};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const ENV_PREFIX: &str = "AGROWEATHER_";
const SECTIONS: &[&str] = &["server", "source", "cache", "analysis", "alerts", "catalog", "map", "bounds"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid config {}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerSection {
    pub listen: String,
    /// Built UI bundle served at `/`.
    pub ui_dir: Option<PathBuf>,
    /// Origin allowed to call the API cross-site.
    pub cors_origin: Option<String>,
}

impl Default for ServerSection {
    fn default() -> Self {
        Self {
            listen: "127.0.0.1:8080".into(),
            ui_dir: None,
            cors_origin: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSection {
    pub base_url: Option<String>,
    pub fixture_dir: Option<PathBuf>,
    /// Query parameter name and value identifying this deployment upstream.
    pub identification_param: Option<String>,
    pub identification_value: Option<String>,
    pub timeout_secs: u64,
    /// Overrides the default of yesterday (UTC).
    pub last_published: Option<NaiveDate>,
}

impl Default for SourceSection {
    fn default() -> Self {
        Self {
            base_url: None,
            fixture_dir: None,
            identification_param: None,
            identification_value: None,
            timeout_secs: 30,
            last_published: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CacheSection {
    pub dir: PathBuf,
    pub ttl_hours: f64,
}

impl Default for CacheSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("cache"),
            ttl_hours: 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub t_base: f64,
    pub gdd_method: GddMethod,
    pub reference_years: u32,
    pub length_days: u32,
    pub templates_dir: Option<PathBuf>,
    pub attribution: Option<String>,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            t_base: DEFAULT_T_BASE,
            gdd_method: GddMethod::default(),
            reference_years: agroweather_core::compare::DEFAULT_REFERENCE_YEARS,
            length_days: 180,
            templates_dir: None,
            attribution: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalogSection {
    /// Attribute codes offered, in order. Empty means all 18.
    pub attributes: Vec<String>,
    /// Display-name overrides keyed by attribute code.
    pub names: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSection {
    pub street_tile_url: String,
    pub satellite_tile_url: Option<String>,
    pub street_attribution: String,
    pub satellite_attribution: Option<String>,
    pub help_url: Option<String>,
    pub center_lat: f64,
    pub center_lon: f64,
    pub zoom: u8,
}

impl Default for MapSection {
    fn default() -> Self {
        Self {
            street_tile_url: "https://tile.openstreetmap.org/{z}/{x}/{y}.png".into(),
            satellite_tile_url: Some(
                "https://server.arcgisonline.com/ArcGIS/rest/services/World_Imagery/MapServer/tile/{z}/{y}/{x}".into(),
            ),
            street_attribution: "© OpenStreetMap contributors".into(),
            satellite_attribution: Some("Imagery © Esri".into()),
            help_url: None,
            center_lat: -28.0,
            center_lon: 134.0,
            zoom: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSection {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

impl Default for BoundsSection {
    fn default() -> Self {
        let b = BoundingBox::AUSTRALIA;
        Self {
            min_lat: b.min_lat,
            max_lat: b.max_lat,
            min_lon: b.min_lon,
            max_lon: b.max_lon,
        }
    }
}

impl From<&BoundsSection> for BoundingBox {
    fn from(b: &BoundsSection) -> Self {
        BoundingBox {
            min_lat: b.min_lat,
            max_lat: b.max_lat,
            min_lon: b.min_lon,
            max_lon: b.max_lon,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub server: ServerSection,
    pub source: SourceSection,
    pub cache: CacheSection,
    pub analysis: AnalysisSection,
    pub alerts: AlertConfig,
    pub catalog: CatalogSection,
    pub map: MapSection,
    pub bounds: BoundsSection,
}

impl ServiceConfig {
    /// Reads `path`, applies overrides from the process environment, resolves
    /// relative paths against the file's directory and validates.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::load_with_env(path, std::env::vars())
    }

    pub fn load_with_env(
        path: &Path,
        env: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let invalid = |message: String| ConfigError::Invalid {
            path: path.to_path_buf(),
            message,
        };
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| invalid(e.message().to_string()))?;
        apply_env(&mut table, env).map_err(invalid)?;
        let mut config: ServiceConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| invalid(e.message().to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        config.validate().map_err(invalid)?;
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.cache.dir);
        for p in [
            &mut self.server.ui_dir,
            &mut self.source.fixture_dir,
            &mut self.analysis.templates_dir,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    /// Checks invariants. Creates the cache directory if it is missing.
    pub fn validate(&self) -> Result<(), String> {
        let mut problems = Vec::new();
        match (&self.source.base_url, &self.source.fixture_dir) {
            (Some(_), Some(_)) => problems.push("set only one of source.base_url and source.fixture_dir".to_string()),
            (None, None) => problems.push("one of source.base_url or source.fixture_dir is required".to_string()),
            _ => {}
        }
        if self.source.identification_param.is_some() != self.source.identification_value.is_some() {
            problems.push("source.identification_param and source.identification_value go together".into());
        }
        if self.analysis.reference_years < 1 {
            problems.push("analysis.reference_years must be at least 1".into());
        }
        if !self.analysis.t_base.is_finite() {
            problems.push("analysis.t_base must be finite".into());
        }
        if !(1..=366).contains(&self.analysis.length_days) {
            problems.push("analysis.length_days must be within 1..=366".into());
        }
        if !(self.cache.ttl_hours.is_finite() && self.cache.ttl_hours >= 0.0) {
            problems.push("cache.ttl_hours must be a non-negative number".into());
        }
        if let Err(e) = self.alerts.validate() {
            problems.push(format!("alerts: {e}"));
        }
        if let Err(e) = self.catalog() {
            problems.push(format!("catalog: {e}"));
        }
        let b = &self.bounds;
        if !(b.min_lat < b.max_lat && b.min_lon < b.max_lon) {
            problems.push("bounds must have min below max".into());
        }
        for (name, path) in [
            ("server.ui_dir", &self.server.ui_dir),
            ("source.fixture_dir", &self.source.fixture_dir),
            ("analysis.templates_dir", &self.analysis.templates_dir),
        ] {
            if let Some(p) = path {
                if !p.is_dir() {
                    problems.push(format!("{name} {} does not exist", p.display()));
                }
            }
        }
        if problems.is_empty() {
            if let Err(e) = std::fs::create_dir_all(&self.cache.dir) {
                problems.push(format!("cache.dir {}: {e}", self.cache.dir.display()));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems.join("; "))
        }
    }

    pub fn catalog(&self) -> Result<AttributeCatalog, String> {
        let ids: Vec<AttributeId> = if self.catalog.attributes.is_empty() {
            AttributeCatalog::default().entries().iter().map(|e| e.id).collect()
        } else {
            self.catalog
                .attributes
                .iter()
                .map(|s| s.parse().map_err(|e: agroweather_core::CoreError| e.to_string()))
                .collect::<Result<_, _>>()?
        };
        let mut names = self.catalog.names.clone();
        let entries = ids
            .into_iter()
            .map(|id| {
                let mut info = AttributeInfo::from(id);
                if let Some(name) = names.remove(id.code()) {
                    info.name = name;
                }
                info
            })
            .collect();
        if let Some(code) = names.keys().next() {
            return Err(format!("name override for `{code}` which is not in the catalog"));
        }
        AttributeCatalog::new(entries).map_err(|e| e.to_string())
    }

    pub fn default_reference(&self) -> ReferenceKind {
        ReferenceKind::MeanOfLast {
            n_years: self.analysis.reference_years,
        }
    }
}

/// Applies `AGROWEATHER_<SECTION>_<KEY>=value` entries. Values are read as
/// TOML literals when they parse as one, otherwise as plain strings.
fn apply_env(table: &mut toml::Table, env: impl IntoIterator<Item = (String, String)>) -> Result<(), String> {
    let mut vars: Vec<(String, String)> = env.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
    vars.sort();
    for (name, raw) in vars {
        let rest = name[ENV_PREFIX.len()..].to_ascii_lowercase();
        let Some((section, key)) = rest.split_once('_') else {
            return Err(format!("environment override {name} has no key"));
        };
        if !SECTIONS.contains(&section) {
            return Err(format!("environment override {name} names unknown section `{section}`"));
        }
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or(toml::Value::String(raw));
        let entry = table
            .entry(section)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        match entry {
            toml::Value::Table(t) => {
                t.insert(key.to_string(), value);
            }
            _ => return Err(format!("`{section}` is not a table")),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, text: &str) -> PathBuf {
        let path = dir.join("agroweather.toml");
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn minimal_fixture_config() {
        let tmp = tempfile::tempdir().unwrap();
        std::fs::create_dir(tmp.path().join("fx")).unwrap();
        let path = write(tmp.path(), "[source]\nfixture_dir = \"fx\"\n");
        let cfg = ServiceConfig::load_with_env(&path, []).unwrap();
        assert_eq!(cfg.source.fixture_dir, Some(tmp.path().join("fx")));
        assert!(cfg.cache.dir.is_dir());
        assert_eq!(cfg.analysis.reference_years, 5);
        assert_eq!(cfg.catalog().unwrap().len(), 18);
    }

    #[test]
    fn env_overrides() {
        let tmp = tempfile::tempdir().unwrap();
        let path = write(tmp.path(), "[source]\nbase_url = \"http://x\"\n");
        let env = [
            ("AGROWEATHER_SERVER_LISTEN".to_string(), "0.0.0.0:9000".to_string()),
            ("AGROWEATHER_ANALYSIS_T_BASE".to_string(), "5".to_string()),
            ("AGROWEATHER_ANALYSIS_REFERENCE_YEARS".to_string(), "3".to_string()),
            ("AGROWEATHER_CATALOG_ATTRIBUTES".to_string(), "[\"VPD\", \"T_MAX\", \"RAIN\"]".to_string()),
            ("OTHER".to_string(), "ignored".to_string()),
        ];
        let cfg = ServiceConfig::load_with_env(&path, env).unwrap();
        assert_eq!(cfg.server.listen, "0.0.0.0:9000");
        assert_eq!(cfg.analysis.t_base, 5.0);
        assert_eq!(cfg.default_reference(), ReferenceKind::MeanOfLast { n_years: 3 });
        assert_eq!(cfg.catalog().unwrap().len(), 3);
    }

    #[test]
    fn invariants() {
        let tmp = tempfile::tempdir().unwrap();
        let check = |text: &str| {
            let path = write(tmp.path(), text);
            match ServiceConfig::load_with_env(&path, []) {
                Err(ConfigError::Invalid { message, .. }) => message,
                other => panic!("expected invalid config, got {other:?}"),
            }
        };
        assert!(check("").contains("required"));
        assert!(check("[source]\nbase_url = \"a\"\nfixture_dir = \".\"\n").contains("only one"));
        assert!(check("[source]\nbase_url = \"a\"\n[analysis]\nreference_years = 0\n").contains("reference_years"));
        assert!(check("[source]\nfixture_dir = \"nope\"\n").contains("does not exist"));
        assert!(check("[source]\nbase_url = \"a\"\nbogus = 1\n").contains("bogus"));
        assert!(check("[source]\nbase_url = \"a\"\n[catalog]\nattributes = [\"VPD\", \"VPD\"]\n").contains("catalog"));
        assert!(check("[source]\nbase_url = \"a\"\n[alerts]\nenabled = true\nmin_threshold = 5.0\nmax_threshold = 1.0\n")
            .contains("alerts"));
    }

    #[test]
    fn example_config_loads() {
        let tmp = tempfile::tempdir().unwrap();
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../agroweather.example.toml");
        let env = [("AGROWEATHER_CACHE_DIR".to_string(), tmp.path().join("c").display().to_string())];
        let cfg = ServiceConfig::load_with_env(&path, env).unwrap();
        assert!(cfg.source.base_url.is_some());
        assert_eq!(cfg.alerts.window_days, 9);
        assert_eq!(cfg.catalog().unwrap().len(), 18);
    }

    #[test]
    fn missing_file_names_path() {
        let err = ServiceConfig::load_with_env(Path::new("/no/such/agroweather.toml"), []).unwrap_err();
        assert!(err.to_string().contains("/no/such/agroweather.toml"));
    }
}
