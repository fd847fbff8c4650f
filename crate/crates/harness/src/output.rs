//! Result files: `results.csv`, `timing.csv`, `summary.json`, `reports.json`.

use std::path::Path;

use serde::Serialize;

use crate::config::{ExperimentConfig, PreparedPoint};
use crate::runner::{ResultRow, RunOutcome, RESULTS_SCHEMA};
use crate::HarnessError;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// Mean, sample standard deviation (0 for a single value), min and max.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self { mean, std: var.sqrt(), min, max })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub point: usize,
    pub d: usize,
    pub k: Option<usize>,
    pub eta: Option<f64>,
    pub n: usize,
    pub delta: f64,
    pub runs: usize,
    pub exact_loss: Stats,
    pub empirical_loss: Option<Stats>,
    /// Loss of the predictor built from the true coefficients (the optimal
    /// junta for junta runs).
    pub oracle_loss: Stats,
    pub optimal_loss: f64,
    pub beta_meas: Stats,
    pub beta_bound: Stats,
    pub bound: Option<Stats>,
    pub bound_theory: Option<Stats>,
    /// Fraction of runs with `exact_loss ≤ bound`.
    pub bound_met_fraction: Option<f64>,
    /// Fraction of runs with `exact_loss ≤ bound_theory`.
    pub bound_theory_met_fraction: Option<f64>,
    /// Junta runs: fraction choosing the most frequent subset, and that subset.
    pub chosen_j_mode: Option<String>,
    pub chosen_j_mode_fraction: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub experiment: String,
    pub algorithm: String,
    pub seeds: Vec<u64>,
    pub points: Vec<PointSummary>,
}

fn fraction(flags: impl Iterator<Item = Option<bool>>) -> Option<f64> {
    let flags: Vec<bool> = flags.collect::<Option<Vec<_>>>()?;
    if flags.is_empty() {
        return None;
    }
    Some(flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64)
}

fn opt_stats(values: impl Iterator<Item = Option<f64>>) -> Option<Stats> {
    Stats::of(&values.collect::<Option<Vec<_>>>()?)
}

pub fn summarize(cfg: &ExperimentConfig, points: &[PreparedPoint], rows: &[ResultRow]) -> Summary {
    let per_point = points
        .iter()
        .map(|p| {
            let rs: Vec<&ResultRow> = rows.iter().filter(|r| r.point == p.point.index).collect();
            let col = |f: fn(&ResultRow) -> f64| Stats::of(&rs.iter().map(|r| f(r)).collect::<Vec<_>>()).expect("every point has runs");
            let mut counts: Vec<(String, usize)> = Vec::new();
            for j in rs.iter().filter_map(|r| r.chosen_j.clone()) {
                match counts.iter_mut().find(|(s, _)| *s == j) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((j, 1)),
                }
            }
            // First-seen subset wins ties, so the mode is deterministic.
            let mode = counts.iter().fold(None::<&(String, usize)>, |best, c| match best {
                Some(b) if b.1 >= c.1 => Some(b),
                _ => Some(c),
            });
            PointSummary {
                point: p.point.index,
                d: p.source.d(),
                k: p.point.k,
                eta: p.point.eta,
                n: p.point.n,
                delta: p.point.delta,
                runs: rs.len(),
                exact_loss: col(|r| r.exact_loss),
                empirical_loss: opt_stats(rs.iter().map(|r| r.empirical_loss)),
                oracle_loss: col(|r| r.oracle_loss),
                optimal_loss: rs[0].optimal_loss,
                beta_meas: col(|r| r.beta_meas),
                beta_bound: col(|r| r.beta_bound),
                bound: opt_stats(rs.iter().map(|r| r.bound)),
                bound_theory: opt_stats(rs.iter().map(|r| r.bound_theory)),
                bound_met_fraction: fraction(rs.iter().map(|r| r.bound_met)),
                bound_theory_met_fraction: fraction(rs.iter().map(|r| r.bound_theory.map(|b| r.exact_loss <= b))),
                chosen_j_mode: mode.map(|m| m.0.clone()),
                chosen_j_mode_fraction: mode.map(|m| m.1 as f64 / rs.len() as f64),
            }
        })
        .collect();
    Summary {
        schema: RESULTS_SCHEMA,
        experiment: cfg.name.clone(),
        algorithm: cfg.algorithm.to_string(),
        seeds: cfg.seeds.clone(),
        points: per_point,
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Runtime(format!("cannot write {}: {e}", path.display()))
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String, HarnessError> {
    serde_json::to_string_pretty(v).map_err(|e| HarnessError::Runtime(format!("cannot serialize: {e}")))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))
}

#[derive(Serialize)]
struct TimingRow {
    point: usize,
    seed_index: usize,
    seed: u64,
    wall_ms: f64,
}

/// Writes every result file into `dir`, creating it if needed.
pub fn write_all(dir: &Path, rows: &[ResultRow], runs: &[RunOutcome], summary: &Summary) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_csv(&dir.join("results.csv"), rows)?;
    let timing: Vec<TimingRow> =
        runs.iter().map(|r| TimingRow { point: r.point, seed_index: r.seed_index, seed: r.report.seed, wall_ms: r.wall_ms }).collect();
    write_csv(&dir.join("timing.csv"), &timing)?;
    let summary_path = dir.join("summary.json");
    std::fs::write(&summary_path, to_json(summary)? + "\n").map_err(|e| io(&summary_path, e))?;
    let reports: Vec<&qfl_core::learner::LearnReport> = runs.iter().map(|r| &r.report).collect();
    let reports_path = dir.join("reports.json");
    std::fs::write(&reports_path, to_json(&reports)? + "\n").map_err(|e| io(&reports_path, e))?;
    Ok(())
}
