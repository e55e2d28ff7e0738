//! Run reports: `trace.csv`, `progress.csv` and `best.json`.
//!
//! CSV files use `,`, `.` decimals, a header row and LF endings. Reals are
//! written with Rust's shortest round-trip formatting. Nothing volatile
//! (timestamps, thread counts) goes into any file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Contribution;
use crate::record::{EvaluationRow, OptimizationRecord};
use crate::rng;

use super::config::RunConfig;

pub const TRACE_FILE: &str = "trace.csv";
pub const PROGRESS_FILE: &str = "progress.csv";
pub const BEST_FILE: &str = "best.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestReport {
    pub methodology: String,
    pub seed: u64,
    pub rng: String,
    pub config_digest: String,
    pub evaluations: usize,
    pub fitness: f64,
    /// Trace row where the best solution was first evaluated.
    pub found_at_row: usize,
    /// Decision id per position.
    pub assignment: Vec<String>,
    pub objectives: BTreeMap<String, f64>,
    pub breakdown: Vec<Contribution>,
}

impl BestReport {
    pub fn new(record: &OptimizationRecord, cfg: &RunConfig, seed: u64) -> Self {
        let best = &record.best;
        Self {
            methodology: record.methodology.keyword().to_string(),
            seed,
            rng: rng::ALGORITHM.to_string(),
            config_digest: cfg.digest(),
            evaluations: record.evaluations(),
            fitness: best.fitness(),
            found_at_row: best.row,
            assignment: best
                .assignment
                .iter()
                .map(|&d| cfg.problem.decisions[d].id.to_string())
                .collect(),
            objectives: best.result.values.clone(),
            breakdown: best.breakdown.contributions.clone(),
        }
    }
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn trace_line(out: &mut String, row: &EvaluationRow) {
    write!(out, "{},{}", row.index, row.iteration).unwrap();
    for v in &row.values {
        write!(out, ",{v}").unwrap();
    }
    writeln!(
        out,
        ",{},{},{},{},{}",
        row.fitness,
        flag(row.accepted),
        flag(row.survivor),
        bit(row.best_so_far),
        bit(row.noop)
    )
    .unwrap();
}

pub fn trace_csv(record: &OptimizationRecord) -> String {
    let mut out = String::from("index,iteration");
    for n in &record.objective_names {
        out.push(',');
        out.push_str(n);
    }
    out.push_str(",fitness,accepted,survivor,best_so_far,noop\n");
    for row in &record.rows {
        trace_line(&mut out, row);
    }
    out
}

pub fn progress_csv(record: &OptimizationRecord) -> String {
    let mut out = String::from("iteration,evaluations,iteration_max,best_so_far\n");
    for p in &record.progress {
        writeln!(
            out,
            "{},{},{},{}",
            p.iteration, p.evaluations, p.iteration_max, p.best_so_far
        )
        .unwrap();
    }
    out
}

pub fn best_json(report: &BestReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes the three report files into `dir`, creating it if needed.
pub fn write_reports(record: &OptimizationRecord, cfg: &RunConfig, seed: u64, dir: &Path) -> Result<BestReport> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join(TRACE_FILE), &trace_csv(record))?;
    write(&dir.join(PROGRESS_FILE), &progress_csv(record))?;
    let best = BestReport::new(record, cfg, seed);
    write(&dir.join(BEST_FILE), &best_json(&best))?;
    Ok(best)
}

pub fn read_best(path: &Path) -> Result<BestReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()),
        )
    })
}
