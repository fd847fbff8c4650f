//! Executes a prepared sweep grid on a worker pool.

use std::time::Instant;

use qfl_core::learner::{junta_learn, qld_learn, Algorithm, LearnConfig, LearnReport};
use serde::Serialize;

use crate::config::{ExperimentConfig, PreparedPoint};
use crate::HarnessError;

pub const RESULTS_SCHEMA: u32 = 1;

/// Tolerance for the bound columns; the bounds are exact inequalities up to rounding.
pub const BOUND_SLACK: f64 = 1e-8;

/// One run: the report plus its place in the grid and wall-clock time.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub point: usize,
    pub seed_index: usize,
    pub report: LearnReport,
    pub wall_ms: f64,
}

/// One line of `results.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub schema: u32,
    pub experiment: String,
    pub point: usize,
    pub seed_index: usize,
    pub seed: u64,
    pub algorithm: String,
    pub source_kind: String,
    pub d: usize,
    pub k: Option<usize>,
    pub eta: Option<f64>,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub cover_strategy: String,
    pub degree_set_size: usize,
    pub cover_subsets: usize,
    pub cover_score: f64,
    pub beta_bound: f64,
    pub beta_meas: f64,
    pub chosen_j: Option<String>,
    pub exact_loss: f64,
    pub empirical_loss: Option<f64>,
    pub n_test: usize,
    pub optimal_loss: f64,
    pub oracle_loss: f64,
    pub opt_k: Option<f64>,
    pub opt_lower_bound: Option<f64>,
    /// Error bound evaluated at the measured estimation error; holds on every run.
    pub bound: Option<f64>,
    /// Error bound evaluated at `√(8·score)`; holds with probability `1 − δ`.
    pub bound_theory: Option<f64>,
    pub bound_met: Option<bool>,
    pub predictor_degenerate: bool,
}

impl ResultRow {
    pub fn new(cfg: &ExperimentConfig, prepared: &PreparedPoint, run: &RunOutcome) -> Self {
        let r = &run.report;
        let p = &prepared.point;
        Self {
            schema: RESULTS_SCHEMA,
            experiment: cfg.name.clone(),
            point: p.index,
            seed_index: run.seed_index,
            seed: r.seed,
            algorithm: r.algorithm.to_string(),
            source_kind: prepared.source.kind().to_string(),
            d: r.d,
            k: p.k,
            eta: p.eta,
            n: r.n,
            delta: r.delta,
            epsilon: r.epsilon,
            cover_strategy: r.cover_strategy.clone(),
            degree_set_size: r.degree_set_size,
            cover_subsets: r.cover.len(),
            cover_score: r.cover_score,
            beta_bound: r.beta_bound,
            beta_meas: r.beta_meas,
            chosen_j: r.chosen_j.as_ref().map(|j| j.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
            exact_loss: r.exact_loss,
            empirical_loss: r.empirical_loss,
            n_test: r.n_test,
            optimal_loss: r.optimal_loss,
            oracle_loss: r.oracle_loss,
            opt_k: r.opt_k,
            opt_lower_bound: r.opt_lower_bound,
            bound: r.bound_pathwise,
            bound_theory: r.bound_value,
            bound_met: r.bound_pathwise.map(|b| r.exact_loss <= b + BOUND_SLACK),
            predictor_degenerate: r.predictor_degenerate,
        }
    }
}

fn learn_config(cfg: &ExperimentConfig, prepared: &PreparedPoint) -> LearnConfig {
    LearnConfig { epsilon: cfg.epsilon, cover: cfg.cover, n_test: cfg.n_test, ..LearnConfig::new(prepared.point.n, prepared.point.delta) }
}

fn run_one(cfg: &ExperimentConfig, prepared: &PreparedPoint, seed_index: usize) -> Result<RunOutcome, HarnessError> {
    let seed = cfg.seeds[seed_index];
    let lc = learn_config(cfg, prepared);
    let start = Instant::now();
    let result = match (cfg.algorithm, &prepared.set) {
        (Algorithm::Qld, Some(set)) => qld_learn(&prepared.source, set, &lc, seed),
        (Algorithm::Junta, _) => junta_learn(&prepared.source, prepared.point.k.unwrap_or(0), &lc, seed),
        (Algorithm::Qld, None) => unreachable!("prepared qld points carry a degree set"),
    };
    let (_, report) = result.map_err(|e| HarnessError::Runtime(format!("point {} seed {seed}: {e}", prepared.point.index)))?;
    Ok(RunOutcome { point: prepared.point.index, seed_index, report, wall_ms: start.elapsed().as_secs_f64() * 1e3 })
}

/// Runs every `(point, seed)` pair. Results come back in `(point, seed)`
/// order whatever the pool size.
pub fn run_grid(cfg: &ExperimentConfig, points: &[PreparedPoint], threads: Option<usize>) -> Result<Vec<RunOutcome>, HarnessError> {
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..cfg.seeds.len()).map(move |s| (p, s))).collect();
    let work = |&(p, s): &(usize, usize)| run_one(cfg, &points[p], s);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        let pool = builder.build().map_err(|e| HarnessError::Runtime(format!("cannot start worker pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(work).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        jobs.iter().map(work).collect()
    }
}
