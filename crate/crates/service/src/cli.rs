//! Command-line entry points.

use agroweather_core::{AttributeId, DateRange, GeoPoint, ReferenceKind, SeasonSpec};
use agroweather_datasource::{Clock, DataSource, HttpSource, RecordingSource, SystemClock};
use agroweather_report::ReportSpec;
use chrono::{DateTime, NaiveDate, Utc};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use thiserror::Error;

use crate::api::AppState;
use crate::config::{ConfigError, ServiceConfig};
use crate::pipeline::{client_from_config, http_config, source_from_config, Analyzer};

#[derive(Debug, Parser)]
#[command(name = "agroweather", version, about = "Agro-climatic weather analysis service")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the HTTP service until interrupted.
    Serve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write a PDF report without starting the service.
    Report(ReportArgs),
    /// Warm the cache for a date range, optionally recording fixtures.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub lat: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lon: f64,
    /// Day-zero, YYYY-MM-DD.
    #[arg(long)]
    pub start: NaiveDate,
    #[arg(long)]
    pub days: u32,
    /// Comma-separated attribute codes; defaults to the whole catalog.
    #[arg(long)]
    pub attrs: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub comparison: bool,
    /// Chart current minus reference instead of both.
    #[arg(long)]
    pub difference: bool,
    /// `mean:<n>` or `season:<year>`.
    #[arg(long)]
    pub reference: Option<ReferenceKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_base: Option<f64>,
    /// RFC 3339 timestamp printed in the header; defaults to now.
    #[arg(long)]
    pub generated_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, default_value = "agroweather.toml")]
    pub config: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub lat: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lon: f64,
    #[arg(long)]
    pub start: NaiveDate,
    #[arg(long)]
    pub end: NaiveDate,
    /// Save upstream responses as fixtures in this directory.
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(1),
            CliError::Runtime(_) => ExitCode::from(2),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Serve { config } => {
            let config = ServiceConfig::load(&config)?;
            let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
            rt.block_on(crate::serve(config, crate::shutdown_signal())).map_err(runtime)
        }
        Command::Report(args) => report(args),
        Command::Fetch(args) => fetch(args),
    }
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let config = ServiceConfig::load(&args.config)?;
    let t_base = args.t_base.unwrap_or(config.analysis.t_base);
    let reference = args.reference.unwrap_or_else(|| config.default_reference());
    let state = AppState::new(config.clone(), source_from_config(&config), Arc::new(SystemClock)).map_err(runtime)?;
    let attributes: Vec<AttributeId> = match &args.attrs {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<AttributeId>())
            .collect::<Result<_, _>>()
            .map_err(runtime)?,
        None => state.analyzer.catalog().entries().iter().map(|e| e.id).collect(),
    };
    let spec = ReportSpec {
        point: GeoPoint::new(args.lat, args.lon),
        season: SeasonSpec::new(args.start, args.days, t_base).map_err(runtime)?,
        attributes,
        comparison: args.comparison,
        difference: args.difference,
        reference,
        generated_at: args.generated_at.unwrap_or_else(|| SystemClock.now()),
        attribution: None,
    };
    let pdf = state.analyzer.report(&spec).map_err(runtime)?;
    std::fs::write(&args.out, &pdf).map_err(|e| runtime(format!("writing {}: {e}", args.out.display())))?;
    println!("wrote {} ({} pages, {} bytes)", args.out.display(), spec.page_count(), pdf.len());
    Ok(())
}

fn fetch(args: FetchArgs) -> Result<(), CliError> {
    let config = ServiceConfig::load(&args.config)?;
    let source: Arc<dyn DataSource> = match (&args.record, &config.source.base_url) {
        (Some(dir), Some(url)) => Arc::new(RecordingSource::new(HttpSource::new(http_config(&config, url)), dir)),
        (Some(_), None) => return Err(runtime("--record needs source.base_url in the config")),
        (None, _) => source_from_config(&config),
    };
    let clock: Arc<dyn Clock> = Arc::new(SystemClock);
    let client = client_from_config(&config, source, clock);
    // constructing an analyzer validates catalog and templates like serve does
    let analyzer = Analyzer::new(config, client).map_err(runtime)?;
    let range = DateRange::new(args.start, args.end).map_err(runtime)?;
    let fetched = analyzer
        .client()
        .fetch_daily_series(GeoPoint::new(args.lat, args.lon), range)
        .map_err(runtime)?;
    println!(
        "{}: {} days from {} (fetched {})",
        if fetched.cache_hit { "cache hit" } else { "cache miss" },
        fetched.records.len(),
        fetched.source,
        fetched.fetched_at.to_rfc3339(),
    );
    Ok(())
}
