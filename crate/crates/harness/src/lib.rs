//! Experiment runner behind the `qfl` command: config parsing, seeded sweeps
//! over the learners, and result files.

pub mod config;
pub mod output;
pub mod runner;

use std::path::{Path, PathBuf};

pub use config::{ConfigPoint, DegreeSpec, ExperimentConfig, PreparedPoint};
pub use output::{PointSummary, Stats, Summary};
pub use runner::{ResultRow, RunOutcome, RESULTS_SCHEMA};

/// Exit status for a successful command.
pub const EXIT_OK: u8 = 0;
/// Exit status when a suite or check fails.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for invalid configuration or arguments.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status for failures after the configuration was accepted.
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            HarnessError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seeds: Option<Vec<u64>>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// What a finished run wrote.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub out_dir: PathBuf,
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
}

/// Reads `QFL_THREADS`; unset or empty means no cap.
pub fn threads_from_env() -> Result<Option<usize>, HarnessError> {
    match std::env::var("QFL_THREADS") {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(HarnessError::Config(format!("QFL_THREADS must be a positive integer, got {v:?}"))),
        },
        _ => Ok(None),
    }
}

/// Validates the whole config, runs every `(point, seed)` pair and writes
/// the result files. Nothing is written unless every run succeeded.
pub fn run_experiment(config: &Path, opts: &RunOptions) -> Result<RunResult, HarnessError> {
    let mut cfg = ExperimentConfig::read(config)?;
    if let Some(seeds) = &opts.seeds {
        cfg.seeds = seeds.clone();
    }
    let points = cfg.prepare()?;
    let runs = runner::run_grid(&cfg, &points, opts.threads)?;
    let rows: Vec<ResultRow> = runs.iter().map(|r| ResultRow::new(&cfg, &points[r.point], r)).collect();
    let summary = output::summarize(&cfg, &points, &rows);
    let out_dir = opts.out_dir.clone().unwrap_or_else(|| cfg.output.clone());
    output::write_all(&out_dir, &rows, &runs, &summary)?;
    Ok(RunResult { out_dir, rows, summary })
}
