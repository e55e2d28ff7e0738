//! Input file, optimizer factory and reports.

pub mod config;
pub mod factory;
pub mod report;

pub use config::{parse_config, Algorithm, RunConfig, RunSettings};
pub use factory::{build_optimizer, check_compatibility, Optimizer};
pub use report::{read_best, write_reports, BestReport};

use crate::error::Result;
use crate::record::OptimizationRecord;

/// Builds and runs the configured optimizer.
pub fn run(cfg: &RunConfig, seed: u64, threads: usize) -> Result<OptimizationRecord> {
    build_optimizer(cfg)?.run(seed, threads)
}
