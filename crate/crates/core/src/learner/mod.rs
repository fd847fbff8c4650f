//! Fourier estimation, sign-operator predictors, the low-degree and junta
//! learners, losses and bound calculators.

mod bounds;
mod estimate;
mod junta;
mod loss;
mod predictor;

pub use bounds::{chernoff_band, junta_error_bound, popt_lower_bound, qld_error_bound, restricted_one_norm, u_function};
pub use estimate::fourier_estimation;
pub use junta::{k_subsets, opt_k, opt_k_with, partial_trace_keep, reduced_operator};
pub use loss::{empirical_loss, exact_loss, exact_loss_joint, exact_loss_of};
pub use predictor::{build_predictor, build_predictor_with, embed, Predictor, PREDICTOR_TOL};

use rand::seq::SliceRandom;
use serde::{Serialize, Serializer};

use crate::compatibility::{allocate_batches, best_cover, BatchPlan, Cover, CoverStrategy};
use crate::exec::Exec;
use crate::operator::{normalized_trace_norm, sign_operator_with, SignTie, DEFAULT_ZERO_TOL};
use crate::pauli::{DegreeSet, FourierTable};
use crate::rng::{Domain, RngStreams};
use crate::simulator::{draw_samples, SampleSource};
use crate::{Error, Result};

/// Default number of simulated test rounds for the empirical loss.
pub const DEFAULT_N_TEST: usize = 10_000;

#[derive(Debug, Clone)]
pub struct LearnConfig {
    pub n: usize,
    pub delta: f64,
    /// Concentration level ε of the target class around the degree set.
    pub epsilon: f64,
    pub cover: CoverStrategy,
    /// Test rounds for the empirical loss; 0 skips it.
    pub n_test: usize,
    pub exec: Exec,
    pub zero_tol: f64,
    pub tie: SignTie,
}

impl LearnConfig {
    pub fn new(n: usize, delta: f64) -> Self {
        Self {
            n,
            delta,
            epsilon: 0.0,
            cover: CoverStrategy::default(),
            n_test: DEFAULT_N_TEST,
            exec: Exec::default(),
            zero_tol: DEFAULT_ZERO_TOL,
            tie: SignTie::Positive,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::invalid(format!("epsilon must be finite and nonnegative, got {}", self.epsilon)));
        }
        if self.n == 0 {
            return Err(Error::invalid("sample count must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Qld,
    Junta,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Qld => "qld",
            Algorithm::Junta => "junta",
        })
    }
}

fn as_ftab<S: Serializer>(t: &FourierTable, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_ftab())
}

/// Everything a learning run measured and every bound it can check.
///
/// `beta_meas = √Σ_{s∈A}(f̂_s − f_s)²` uses the ground truth and is only
/// available in simulation. `bound_pathwise` evaluates the error bound at
/// `beta_meas` and holds on every run; `bound_value` evaluates it at
/// `beta_bound = √(8·score)` and holds with probability `1 − δ`. Both are
/// absent when the X-marginal is not maximally mixed.
#[derive(Debug, Clone, Serialize)]
pub struct LearnReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub d: usize,
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub degree_set_size: usize,
    pub cover_strategy: String,
    pub cover: Cover,
    pub plan: BatchPlan,
    pub cover_score: f64,
    pub beta_bound: f64,
    pub beta_meas: f64,
    pub chosen_j: Option<Vec<usize>>,
    pub exact_loss: f64,
    pub empirical_loss: Option<f64>,
    pub n_test: usize,
    /// Minimum loss over all measurements.
    pub optimal_loss: f64,
    pub opt_k: Option<f64>,
    pub opt_lower_bound: Option<f64>,
    /// Loss of the predictor built from exact coefficients.
    pub oracle_loss: f64,
    pub bound_value: Option<f64>,
    pub bound_pathwise: Option<f64>,
    pub predictor_degenerate: bool,
    #[serde(serialize_with = "as_ftab")]
    pub estimates: FourierTable,
}

impl LearnReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(e.to_string()))
    }
}

struct Estimation {
    cover: Cover,
    plan: BatchPlan,
    score: f64,
    table: FourierTable,
}

/// Cover, allocate, draw, shuffle, measure.
fn estimate(source: &SampleSource, set: &DegreeSet, cfg: &LearnConfig, streams: &RngStreams) -> Result<Estimation> {
    let cover = best_cover(set, cfg.n, cfg.delta, cfg.cover, cfg.exec)?;
    let plan = allocate_batches(cfg.n, &cover, cfg.delta)?;
    let score = cover.score(cfg.n, cfg.delta)?;
    let mut samples = draw_samples(source, cfg.n, streams, cfg.exec);
    samples.shuffle(&mut streams.stream(Domain::Shuffle, 0));
    let table = fourier_estimation(&samples, &cover, &plan, streams, cfg.exec)?;
    Ok(Estimation { cover, plan, score, table })
}

fn beta_meas(estimates: &FourierTable, truth: &FourierTable, set: &DegreeSet) -> f64 {
    set.iter()
        .map(|s| {
            let e = estimates.get(s) - truth.get(s);
            e * e
        })
        .sum::<f64>()
        .sqrt()
}

fn empirical(pred: &Predictor, source: &SampleSource, cfg: &LearnConfig, streams: &RngStreams) -> Result<Option<f64>> {
    if cfg.n_test == 0 {
        return Ok(None);
    }
    empirical_loss(pred, source, cfg.n_test, streams, cfg.exec).map(Some)
}

fn check_dims(source: &SampleSource, d: usize) -> Result<()> {
    if source.d() != d {
        return Err(Error::DimensionMismatch { expected: source.d(), got: d });
    }
    Ok(())
}

/// The quantum low-degree algorithm: estimate `f̂_s` for `s ∈ A` through a
/// compatibility cover and return `sign[Σ_{s∈A} f̂_s σ^s]`.
pub fn qld_learn(source: &SampleSource, set: &DegreeSet, cfg: &LearnConfig, seed: u64) -> Result<(Predictor, LearnReport)> {
    cfg.check()?;
    check_dims(source, set.d())?;
    let streams = RngStreams::new(seed);
    let est = estimate(source, set, cfg, &streams)?;
    let pred = build_predictor_with(&est.table, set, cfg.zero_tol, cfg.tie)?;
    let truth = source.table_on(set, cfg.exec)?;
    let oracle = build_predictor_with(&truth, set, cfg.zero_tol, cfg.tie)?;
    let beta_bound = (8.0 * est.score).sqrt();
    let beta_meas = beta_meas(&est.table, &truth, set);
    let (opt_lb, bound_value, bound_pathwise) = if source.is_maximally_mixed() {
        let lb = popt_lower_bound(&truth, set, cfg.epsilon)?;
        (Some(lb), Some(qld_error_bound(lb, cfg.epsilon, beta_bound)?), Some(qld_error_bound(lb, cfg.epsilon, beta_meas)?))
    } else {
        (None, None, None)
    };
    let report = LearnReport {
        algorithm: Algorithm::Qld,
        seed,
        d: set.d(),
        n: cfg.n,
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        degree_set_size: set.len(),
        cover_strategy: cfg.cover.to_string(),
        cover: est.cover,
        plan: est.plan,
        cover_score: est.score,
        beta_bound,
        beta_meas,
        chosen_j: None,
        exact_loss: exact_loss(&pred, source)?,
        empirical_loss: empirical(&pred, source, cfg, &streams)?,
        n_test: cfg.n_test,
        optimal_loss: source.optimal_loss()?,
        opt_k: None,
        opt_lower_bound: opt_lb,
        oracle_loss: exact_loss(&oracle, source)?,
        bound_value,
        bound_pathwise,
        predictor_degenerate: pred.is_degenerate(),
        estimates: est.table,
    };
    Ok((pred, report))
}

/// The subset `J` of size `k` maximizing `‖F̂^{⊆J}‖_{1,ρ}` (first in
/// lexicographic order on ties) and the norms of every candidate.
pub fn select_junta(estimates: &FourierTable, k: usize, exec: Exec) -> Result<(Vec<usize>, Vec<f64>)> {
    let subsets = k_subsets(estimates.d(), k);
    if subsets.is_empty() || k == 0 {
        return Err(Error::invalid(format!("k must lie in 1..={}, got {k}", estimates.d())));
    }
    let norms = exec.try_map(subsets.len(), |i| normalized_trace_norm(&reduced_operator(estimates, &subsets[i])?))?;
    let (best, _) = junta::argmax_first(&norms);
    Ok((subsets[best].clone(), norms))
}

/// The `k`-junta learner: estimate every coefficient of support at most `k`,
/// pick the `k` qubits carrying the largest restricted 1-norm and return
/// `sign[F̂^{⊆J}]` acting as identity elsewhere.
pub fn junta_learn(source: &SampleSource, k: usize, cfg: &LearnConfig, seed: u64) -> Result<(Predictor, LearnReport)> {
    cfg.check()?;
    let d = source.d();
    if k == 0 || k > d {
        return Err(Error::invalid(format!("k must lie in 1..={d}, got {k}")));
    }
    let set = DegreeSet::upto(d, k)?;
    let streams = RngStreams::new(seed);
    let est = estimate(source, &set, cfg, &streams)?;
    let (j, _) = select_junta(&est.table, k, cfg.exec)?;
    let local = reduced_operator(&est.table, &j)?;
    let degenerate = est.table.restrict_to_subset(&j).iter().all(|(_, v)| v == 0.0);
    let g = sign_operator_with(&local, cfg.zero_tol, cfg.tie)?;
    let g = crate::operator::HermitianOperator::from_hermitian(embed(g.matrix(), &j, d)?);
    let pred = Predictor::from_sign_operator(g)?.flagged(degenerate);
    let truth = source.table_on(&set, cfg.exec)?;
    let beta_bound = (8.0 * est.score).sqrt();
    let beta_meas = beta_meas(&est.table, &truth, &set);
    let opt = if source.is_maximally_mixed() { Some(opt_k_with(source, k, cfg.exec)?) } else { None };
    let (bound_value, bound_pathwise) = match &opt {
        Some((v, _)) => {
            let e = beta_meas * beta_meas;
            (Some(junta_error_bound(*v, 8.0 * est.score)?), Some(v + e.sqrt() + u_function(e.sqrt())?))
        }
        None => (None, None),
    };
    let oracle_loss = match &opt {
        Some((v, _)) => *v,
        None => {
            let (jt, _) = select_junta(&truth, k, cfg.exec)?;
            let g = sign_operator_with(&reduced_operator(&truth, &jt)?, cfg.zero_tol, cfg.tie)?;
            exact_loss_of(&crate::operator::HermitianOperator::from_hermitian(embed(g.matrix(), &jt, d)?), source)?
        }
    };
    let report = LearnReport {
        algorithm: Algorithm::Junta,
        seed,
        d,
        n: cfg.n,
        delta: cfg.delta,
        epsilon: cfg.epsilon,
        degree_set_size: set.len(),
        cover_strategy: cfg.cover.to_string(),
        cover: est.cover,
        plan: est.plan,
        cover_score: est.score,
        beta_bound,
        beta_meas,
        chosen_j: Some(j),
        exact_loss: exact_loss(&pred, source)?,
        empirical_loss: empirical(&pred, source, cfg, &streams)?,
        n_test: cfg.n_test,
        optimal_loss: source.optimal_loss()?,
        opt_k: opt.as_ref().map(|o| o.0),
        opt_lower_bound: None,
        oracle_loss,
        bound_value,
        bound_pathwise,
        predictor_degenerate: degenerate,
        estimates: est.table,
    };
    Ok((pred, report))
}
