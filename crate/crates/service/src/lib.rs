//! HTTP JSON service and CLI over the agro-climatic analysis crates.
//!
//! Routes:
//!
//! | method | path | |
//! |---|---|---|
//! | GET | `/healthz` | liveness |
//! | GET | `/api/v1/config/public` | UI bootstrap |
//! | GET | `/api/v1/attributes` | attribute catalog, ETag-cacheable |
//! | GET | `/api/v1/series` | season analysis |
//! | POST | `/api/v1/report` | PDF report |

pub mod api;
pub mod cli;
pub mod config;
pub mod error;
pub mod pipeline;

use agroweather_datasource::SystemClock;
use std::future::Future;
use std::sync::Arc;

pub use api::{router, AppState, PublicConfig};
pub use config::{ConfigError, ServiceConfig};
pub use error::{ApiError, ErrorBody, Violation};
pub use pipeline::{Analyzer, AttributeResult, Provenance, SeriesRequest, SeriesResponse};

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(config: ServiceConfig, shutdown: impl Future<Output = ()> + Send + 'static) -> anyhow::Result<()> {
    let source = pipeline::source_from_config(&config);
    let state = AppState::new(config.clone(), source, Arc::new(SystemClock))?;
    let listener = tokio::net::TcpListener::bind(&config.server.listen).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Resolves on Ctrl-C or, on Unix, SIGTERM.
pub async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
    log::info!("shutting down");
}
