//! Verification suites over `sn-core` and the report format they emit.

pub mod config;
pub mod report;
pub mod suites;

use std::time::Instant;

use thiserror::Error;

use config::RunConfig;
use report::{log_digest, Report, SuiteReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite `{0}` (known: {known})", known = suites::SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] sn_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Runs every configured suite in order.
pub fn run_suite(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.suites.len());
    for name in &cfg.suites {
        let start = Instant::now();
        let outcome = suites::run_named(name, cfg)?;
        let elapsed = start.elapsed().as_millis() as u64;
        out.push(SuiteReport {
            name: name.clone(),
            status: outcome.status,
            counters: outcome.counters,
            time_ms: cfg.timing.then_some(elapsed),
            log_digest: log_digest(&outcome.log),
        });
    }
    Ok(Report { config: cfg.echo(), suites: out })
}

/// [`run_suite`] on a dedicated pool of `workers` threads.
pub fn run_with_workers(cfg: &RunConfig, workers: Option<usize>) -> Result<Report, CliError> {
    match workers {
        None => run_suite(cfg),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            pool.install(|| run_suite(cfg))
        }
    }
}
