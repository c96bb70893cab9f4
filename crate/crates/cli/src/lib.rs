//! Batch driver for saxl-core: brute-force Saxl graph checks, class data
//! cross-checks and Q-ledger certification, reported as JSON.

pub mod commands;
pub mod config;
pub mod report;

use std::time::Instant;

use config::{RunConfig, Task};
use report::Report;

/// Runs a validated configuration on a pool of `cfg.jobs` threads.
pub fn run(cfg: &RunConfig) -> Result<Report, commands::ConfigError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| commands::ConfigError(e.to_string()))?;
    let start = Instant::now();
    let checks = pool.install(|| match cfg.task {
        Task::VerifyDirect { p, m, case } => commands::verify_direct(p, m, case, cfg.cap, cfg.modulus_index),
        Task::CrosscheckClasses { p, m } => commands::crosscheck_classes(p, m, cfg.cap, cfg.modulus_index),
        Task::CertifyBounds { setting, grid_max } => Ok(commands::certify_bounds(setting, grid_max)),
    })?;
    Ok(Report::new(cfg.echo(), checks, start.elapsed().as_millis() as u64))
}
