//! Invariant suites over every module, runnable as one command.
//!
//! `fast` covers exact oracles at `d ≤ 3`; `full` adds the Monte-Carlo
//! suites and the largest eigensolver sizes. A [`Fault`] can be injected to
//! confirm that a broken build is caught and the failing check is named.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::compatibility::{allocate_sizes, allocation_objective, batch_weights, best_cover, reference_effects, Cover, CoverStrategy};
use crate::exec::Exec;
use crate::learner::{
    build_predictor_with, chernoff_band, empirical_loss, exact_loss, exact_loss_of, fourier_estimation, junta_learn, opt_k_with, qld_learn,
    LearnConfig, Predictor,
};
use crate::operator::{
    rho_inner_product, rho_norm, sign_operator, sign_operator_with, ComplexMatrix, DensityOperator, HermitianOperator, NormOrder, SignTie,
    DEFAULT_ZERO_TOL,
};
use crate::pauli::{classical_embedding, fourier_transform_full, synthesize, DegreeSet, FourierTable, PauliString};
use crate::rng::{Domain, RngStreams};
use crate::simulator::{
    draw_samples, joint_sample_state, junta_truth_table, measure_batch, BooleanJunta, CompatibleBatch, LabeledSample, SampleSource,
};
use crate::{Error, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(Error::parse(format!("unknown suite {other:?}, expected fast or full"))),
        }
    }
}

/// Deliberate defects for checking that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Zero eigenvalues go to −1 instead of +1.
    SignTieBreak,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "sign-tie-break" => Ok(Fault::SignTieBreak),
            other => Err(Error::parse(format!("unknown fault {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub fault: Option<Fault>,
    pub exec: Exec,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(suite: Suite) -> Self {
        Self { suite, fault: None, exec: Exec::default(), seed: 2024 }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suite: Suite,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }
}

type Check = fn(&Ctx) -> Result<String, String>;

struct Ctx {
    streams: RngStreams,
    tie: SignTie,
    exec: Exec,
}

impl Ctx {
    fn rng(&self, index: u64) -> ChaCha8Rng {
        self.streams.stream(Domain::Check, index)
    }
}

const FAST: &[(&str, Check)] = &[
    ("sign-tie-break", sign_tie_break),
    ("eig-reconstruction", eig_reconstruction),
    ("sign-involution", sign_involution),
    ("rho-norm-inequalities", rho_norm_inequalities),
    ("pauli-orthonormality", pauli_orthonormality),
    ("fourier-parseval", fourier_parseval),
    ("fourier-round-trip", fourier_round_trip),
    ("commutation-oracle", commutation_oracle),
    ("cover-ordering", cover_ordering),
    ("allocation-grid", allocation_grid),
    ("bell-optimum", bell_optimum),
    ("degenerate-predictor", degenerate_predictor),
    ("loss-decomposition", loss_decomposition),
    ("junta-optimality", junta_optimality),
];

const FULL: &[(&str, Check)] = &[
    ("eig-large", eig_large),
    ("batch-chi-square", batch_chi_square),
    ("estimation-concentration", estimation_concentration),
    ("qld-parity", qld_parity),
    ("noisy-parity", noisy_parity),
    ("junta-recovery", junta_recovery),
    ("loss-consistency", loss_consistency),
];

/// Names of the checks a suite runs, in order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    checks(suite).map(|(n, _)| *n).collect()
}

fn checks(suite: Suite) -> impl Iterator<Item = &'static (&'static str, Check)> {
    let extra: &[(&str, Check)] = if suite == Suite::Full { FULL } else { &[] };
    FAST.iter().chain(extra)
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    run_with(opts, |_| {})
}

/// Runs every check of the suite in order, reporting each outcome as it
/// completes.
pub fn run_with(opts: &VerifyOptions, mut on_outcome: impl FnMut(&CheckOutcome)) -> VerifyReport {
    let ctx = Ctx {
        streams: RngStreams::new(opts.seed),
        tie: match opts.fault {
            Some(Fault::SignTieBreak) => SignTie::Negative,
            None => SignTie::Positive,
        },
        exec: opts.exec,
    };
    let mut outcomes = Vec::new();
    for (name, check) in checks(opts.suite) {
        let start = Instant::now();
        let result = check(&ctx);
        let outcome =
            CheckOutcome { name, passed: result.is_ok(), detail: result.unwrap_or_else(|e| e), seconds: start.elapsed().as_secs_f64() };
        on_outcome(&outcome);
        outcomes.push(outcome);
    }
    VerifyReport { suite: opts.suite, outcomes }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_hermitian(r: &mut impl Rng, dim: usize) -> HermitianOperator {
    let m = ComplexMatrix::from_fn(dim, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    HermitianOperator::from_hermitian(m.hermitian_part())
}

fn random_density(r: &mut impl Rng, dim: usize) -> DensityOperator {
    let b = ComplexMatrix::from_fn(dim, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    let m = b.matmul(&b.adjoint());
    let t = m.trace().re;
    DensityOperator::new(m.scale(1.0 / t)).expect("B B† / tr is a density operator")
}

fn random_sign(r: &mut impl Rng, dim: usize) -> HermitianOperator {
    sign_operator(&random_hermitian(r, dim)).expect("random Hermitian input is valid")
}

fn random_string(r: &mut impl Rng, d: usize) -> PauliString {
    let mask = (1u64 << d) - 1;
    PauliString::from_masks(d, r.random::<u64>() & mask, r.random::<u64>() & mask).expect("masks fit in d bits")
}

fn sign_tie_break(ctx: &Ctx) -> Result<String, String> {
    let zero = lib(HermitianOperator::new(ComplexMatrix::zeros(4)))?;
    let g = lib(sign_operator_with(&zero, DEFAULT_ZERO_TOL, ctx.tie))?;
    ensure(g.matrix() == &ComplexMatrix::identity(4), || "sign[0] is not the identity".into())?;
    let h = HermitianOperator::from_diag(&[1e-14, -2.0, 3.0]);
    let g = lib(sign_operator_with(&h, DEFAULT_ZERO_TOL, ctx.tie))?;
    ensure(g.matrix() == &ComplexMatrix::from_diag(&[1.0, -1.0, 1.0]), || "eigenvalue inside the zero band not sent to +1".into())?;
    Ok("zero band maps to +1".into())
}

fn reconstruction_error(h: &HermitianOperator) -> Result<f64, String> {
    let sp = lib(h.eig())?;
    Ok(sp.reconstruct().max_abs_diff(h.matrix()))
}

fn eig_reconstruction(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(1);
    let mut worst: f64 = 0.0;
    for dim in [1, 2, 3, 5, 8, 16, 33, 64, 128] {
        let err = reconstruction_error(&random_hermitian(&mut r, dim))?;
        ensure(err <= 1e-8, || format!("dim {dim}: reconstruction error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.1e}"))
}

fn eig_large(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(2);
    let mut worst: f64 = 0.0;
    for dim in [1 << 10, 1 << 11] {
        let err = reconstruction_error(&random_hermitian(&mut r, dim))?;
        ensure(err <= 1e-8, || format!("dim {dim}: reconstruction error {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.1e} up to dim 2048"))
}

fn sign_involution(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(3);
    for i in 0..60 {
        let dim = 1 << (i % 4);
        let mut h = random_hermitian(&mut r, dim);
        if i % 5 == 0 {
            // Rank-deficient input exercises the zero band.
            let mask = ComplexMatrix::from_diag(&(0..dim).map(|k| (k % 2) as f64).collect::<Vec<_>>());
            h = HermitianOperator::from_hermitian(mask.matmul(h.matrix()).matmul(&mask));
        }
        let g = lib(sign_operator_with(&h, DEFAULT_ZERO_TOL, ctx.tie))?;
        let res = g.involution_residual();
        ensure(res <= 1e-8, || format!("instance {i}: ‖G² − I‖ = {res:e}"))?;
    }
    Ok("60 instances".into())
}

fn rho_norm_inequalities(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(4);
    for i in 0..50 {
        let dim = 1 << (1 + i % 3);
        let (a, b, rho) = (random_hermitian(&mut r, dim), random_hermitian(&mut r, dim), random_density(&mut r, dim));
        let n2 = |x: &HermitianOperator| lib(rho_norm(x, NormOrder::Two, &rho));
        let ab = lib(rho_inner_product(a.matrix(), b.matrix(), &rho))?;
        let aa = lib(rho_inner_product(a.matrix(), a.matrix(), &rho))?;
        let (na, nb, ns) = (n2(&a)?, n2(&b)?, n2(&a.add(&b))?);
        let n1 = lib(rho_norm(&a, NormOrder::One, &rho))?;
        ensure((ns * ns - (na * na + nb * nb + 2.0 * ab.re)).abs() <= 1e-8, || format!("instance {i}: expansion"))?;
        ensure(ab.norm() <= na * nb + 1e-10, || format!("instance {i}: Cauchy-Schwarz"))?;
        ensure(ns <= na + nb + 1e-10, || format!("instance {i}: triangle"))?;
        ensure(n1 <= na + 1e-10, || format!("instance {i}: one-norm above two-norm"))?;
        ensure(aa.im.abs() <= 1e-12 && aa.re >= 0.0, || format!("instance {i}: ⟨A, A⟩ not real nonnegative"))?;
    }
    Ok("50 instances".into())
}

fn pauli_orthonormality(_: &Ctx) -> Result<String, String> {
    for d in 1..=3 {
        let set = lib(DegreeSet::full(d))?;
        let mats = set.iter().map(|s| lib(s.matrix())).collect::<Result<Vec<_>, _>>()?;
        let scale = 1.0 / (1 << d) as f64;
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let v = a.matrix().trace_product(b.matrix()) * scale;
                let want = if i == j { 1.0 } else { 0.0 };
                ensure((v - want).norm() <= 1e-12, || format!("d = {d}: ⟨{}, {}⟩ = {v}", set.strings()[i], set.strings()[j]))?;
            }
        }
    }
    Ok("d ≤ 3".into())
}

fn fourier_parseval(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(5);
    for d in 1..=3 {
        for _ in 0..10 {
            let a = random_hermitian(&mut r, 1 << d);
            let table = lib(fourier_transform_full(a.matrix(), ctx.exec))?;
            let hs = a.matrix().trace_product_re(a.matrix()) / (1 << d) as f64;
            let err = (table.sum_squares() - hs).abs();
            ensure(err <= 1e-12 * hs.max(1.0), || format!("d = {d}: Parseval residual {err:e}"))?;
        }
    }
    Ok("30 instances".into())
}

fn fourier_round_trip(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(6);
    for d in 1..=3 {
        for _ in 0..10 {
            let a = random_hermitian(&mut r, 1 << d);
            let back = lib(synthesize(&lib(fourier_transform_full(a.matrix(), ctx.exec))?))?;
            let err = back.matrix().max_abs_diff(a.matrix());
            ensure(err <= 1e-12, || format!("d = {d}: round-trip error {err:e}"))?;
        }
    }
    Ok("30 instances".into())
}

fn commutation_oracle(_: &Ctx) -> Result<String, String> {
    let mut pairs = 0;
    for d in 1..=3 {
        let set = lib(DegreeSet::full(d))?;
        let mats = set.iter().map(|s| lib(s.matrix())).collect::<Result<Vec<_>, _>>()?;
        for (i, s) in set.iter().enumerate() {
            for (j, t) in set.iter().enumerate() {
                let (a, b) = (mats[i].matrix(), mats[j].matrix());
                let dense = a.matmul(b).max_abs_diff(&b.matmul(a)) < 1e-12;
                ensure(dense == s.commutes_with(t), || format!("{s} and {t} disagree"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn cover_ordering(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(7);
    let (n, delta) = (1000, 0.05);
    for i in 0..20 {
        let size = r.random_range(2..=10);
        let mut strings = Vec::new();
        while strings.len() < size {
            let s = random_string(&mut r, 3);
            if !strings.contains(&s) {
                strings.push(s);
            }
        }
        let set = lib(DegreeSet::new(3, strings))?;
        let ex = lib(best_cover(&set, n, delta, CoverStrategy::Exhaustive, ctx.exec))?;
        let gr = lib(best_cover(&set, n, delta, CoverStrategy::default(), ctx.exec))?;
        let (se, sg) = (lib(ex.score(n, delta))?, lib(gr.score(n, delta))?);
        let ss = lib(Cover::singletons(&set).score(n, delta))?;
        ensure(se <= sg + 1e-12 && sg <= ss + 1e-12, || format!("instance {i}: {se} / {sg} / {ss} out of order"))?;
    }
    Ok("20 sets".into())
}

fn allocation_grid(_: &Ctx) -> Result<String, String> {
    let n = 1000;
    for sizes in [[1, 1, 1], [1, 2, 4], [3, 3, 7], [10, 1, 5]] {
        let w = batch_weights(&sizes, 0.05);
        let plan = lib(allocate_sizes(n, &sizes, 0.05))?;
        let mut best = f64::INFINITY;
        for a in 1..n - 1 {
            for b in 1..n - a {
                best = best.min(allocation_objective(&w, &[a, b, n - a - b]));
            }
        }
        let got = allocation_objective(&w, &plan.sizes);
        ensure(got <= best + 1e-9, || format!("sizes {sizes:?}: {got} above grid optimum {best}"))?;
    }
    Ok("4 instances".into())
}

fn bell_example() -> Result<SampleSource, String> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = |sign: f64| {
        let phi = [C64::new(sign * h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
        ComplexMatrix::outer(&phi, &phi).scale(0.5).add(&ComplexMatrix::from_diag(&[0.0, 0.25, 0.25, 0.0]))
    };
    lib(SampleSource::from_matrices(0.5, state(1.0), state(-1.0)))
}

fn bell_optimum(ctx: &Ctx) -> Result<String, String> {
    let src = bell_example()?;
    let (v, j) = lib(opt_k_with(&src, 2, ctx.exec))?;
    ensure((v - 0.25).abs() <= 1e-9 && j == [0, 1], || format!("opt(2) = {v} on {j:?}"))?;
    let set = lib(DegreeSet::full(2))?;
    let pred = lib(build_predictor_with(lib(src.fourier_table())?, &set, DEFAULT_ZERO_TOL, ctx.tie))?;
    let l = lib(exact_loss(&pred, &src))?;
    ensure((l - 0.25).abs() <= 1e-9, || format!("optimal predictor loss {l}"))?;
    Ok("loss 1/4".into())
}

fn degenerate_predictor(ctx: &Ctx) -> Result<String, String> {
    let pred = lib(build_predictor_with(&FourierTable::new(2), &lib(DegreeSet::new(2, []))?, DEFAULT_ZERO_TOL, ctx.tie))?;
    ensure(pred.is_degenerate(), || "empty estimate not flagged degenerate".into())?;
    ensure(pred.g_op().matrix() == &ComplexMatrix::identity(4), || "empty estimate does not give G = I".into())?;
    Ok("G = I".into())
}

fn loss_decomposition(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(8);
    for d in 1..=3 {
        for eta in [0.0, 0.2] {
            let src = lib(SampleSource::noisy(&random_sign(&mut r, 1 << d), eta))?;
            let g = random_sign(&mut r, 1 << d);
            let gt = lib(fourier_transform_full(g.matrix(), ctx.exec))?;
            let ft = lib(src.fourier_table())?;
            let dot: f64 = lib(DegreeSet::full(d))?.iter().map(|s| gt.get(s) * ft.get(s)).sum();
            let l = lib(exact_loss_of(&g, &src))?;
            ensure((l - (0.5 - 0.5 * dot)).abs() <= 1e-8, || format!("d = {d}: {l} vs {}", 0.5 - 0.5 * dot))?;
        }
    }
    Ok("6 instances".into())
}

fn junta_optimality(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(9);
    let full = lib(DegreeSet::full(3))?;
    for i in 0..10 {
        let src = lib(SampleSource::noisy(&random_sign(&mut r, 8), r.random_range(0.0..0.3)))?;
        let table = lib(src.fourier_table())?;
        let mut best: f64 = 0.0;
        for c in 0..3 {
            let mut m = ComplexMatrix::zeros(8);
            for s in full.iter().filter(|s| s.supported_in(&[c])) {
                m.axpy(table.get(s), lib(s.matrix())?.matrix());
            }
            let sp = lib(lib(HermitianOperator::new(m))?.eig())?;
            best = best.max(sp.eigenvalues.iter().map(|l| l.abs()).sum::<f64>() / 8.0);
        }
        let (v, _) = lib(opt_k_with(&src, 1, ctx.exec))?;
        ensure((v - (0.5 - 0.5 * best)).abs() <= 1e-9, || format!("instance {i}: opt(1) = {v}, brute force {}", 0.5 - 0.5 * best))?;
    }
    Ok("10 instances".into())
}

fn batch_chi_square(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(10);
    let n = 100_000;
    let mut worst: f64 = 1.0;
    for (k, clique) in [["30", "03"], ["11", "22"], ["12", "21"]].iter().enumerate() {
        let strings = clique.iter().map(|s| lib(s.parse::<PauliString>())).collect::<Result<Vec<_>, _>>()?;
        let batch = lib(CompatibleBatch::new(strings.clone()))?;
        let sample = LabeledSample { label: r.random_range(0..2), state: random_density(&mut r, 4).into_shared() };
        let joint = lib(joint_sample_state(&sample))?;
        let probs: Vec<f64> = lib(reference_effects(&strings))?.iter().map(|g| g.trace_product(joint.matrix())).collect();
        let mut counts = vec![0usize; probs.len()];
        let mut mr = ctx.streams.child(k as u64).stream(Domain::Measure, 0);
        for _ in 0..n {
            let w = lib(measure_batch(&sample, &batch, &mut mr))?;
            counts[w.iter().enumerate().fold(0, |acc, (l, &v)| acc | usize::from(v == -1) << l)] += 1;
        }
        let (mut stat, mut cells) = (0.0, 0usize);
        for (&o, &p) in counts.iter().zip(&probs) {
            if p > 1e-12 {
                let e = p * n as f64;
                stat += (o as f64 - e).powi(2) / e;
                cells += 1;
            } else if o > 0 {
                return Err(format!("{clique:?}: outcome with zero probability observed"));
            }
        }
        if cells > 1 {
            let p = 1.0 - ChiSquared::new((cells - 1) as f64).map_err(|e| e.to_string())?.cdf(stat);
            ensure(p > 1e-3, || format!("{clique:?}: χ² p-value {p:e}"))?;
            worst = worst.min(p);
        }
    }
    Ok(format!("min p-value {worst:.3}"))
}

fn estimation_concentration(ctx: &Ctx) -> Result<String, String> {
    let z = lib("3".parse::<PauliString>())?;
    let src = lib(SampleSource::realizable(&lib(z.matrix())?))?;
    let cover = lib(Cover::new(1, vec![vec![z]]))?;
    let n = 10_000;
    let plan = lib(crate::compatibility::allocate_batches(n, &cover, 0.05))?;
    let band = lib(chernoff_band(n, 0.05, 1))?;
    let mut hits = 0;
    for seed in 0..20 {
        let streams = ctx.streams.child(seed);
        let samples = draw_samples(&src, n, &streams, ctx.exec);
        let est = lib(fourier_estimation(&samples, &cover, &plan, &streams, ctx.exec))?.get(&z);
        hits += usize::from((est - 1.0).abs() <= band);
    }
    ensure(hits >= 19, || format!("{hits}/20 runs inside the band"))?;
    Ok(format!("{hits}/20 inside ±{band:.4}"))
}

fn parity_source(eta: f64) -> Result<SampleSource, String> {
    let truth = lib(junta_truth_table(4, &[0, 2], BooleanJunta::Parity))?;
    lib(SampleSource::noisy(&lib(classical_embedding(&truth))?, eta))
}

fn learn_config(n: usize, exec: Exec) -> LearnConfig {
    LearnConfig { n_test: 0, exec, ..LearnConfig::new(n, 0.05) }
}

fn qld_parity(ctx: &Ctx) -> Result<String, String> {
    let src = parity_source(0.0)?;
    let set = lib(DegreeSet::classical_upto(4, 2))?;
    let cfg = learn_config(50_000, ctx.exec);
    let mut good = 0;
    for seed in 0..20 {
        let (_, rep) = lib(qld_learn(&src, &set, &cfg, ctx.streams.seed() + seed))?;
        good += usize::from(rep.exact_loss <= 0.05);
        ensure(rep.exact_loss <= 5.0 * rep.beta_meas + 1e-8, || format!("seed {seed}: loss {} above 5β", rep.exact_loss))?;
    }
    ensure(good >= 18, || format!("{good}/20 runs with loss ≤ 0.05"))?;
    Ok(format!("{good}/20 runs with loss ≤ 0.05"))
}

fn noisy_parity(ctx: &Ctx) -> Result<String, String> {
    let eta = 0.1;
    let src = parity_source(eta)?;
    let set = lib(DegreeSet::classical_upto(4, 2))?;
    let cfg = learn_config(50_000, ctx.exec);
    for seed in 0..5 {
        let (_, rep) = lib(qld_learn(&src, &set, &cfg, ctx.streams.seed() + seed))?;
        let hi = 2.0 * eta + 5.0 * rep.beta_meas + 0.02;
        ensure(rep.exact_loss >= eta - 1e-12 && rep.exact_loss <= hi, || {
            format!("seed {seed}: loss {} outside [{eta}, {hi}]", rep.exact_loss)
        })?;
    }
    Ok("5 runs inside [η, 2η + 5β + 0.02]".into())
}

fn junta_recovery(ctx: &Ctx) -> Result<String, String> {
    let truth = lib(junta_truth_table(5, &[0, 2], BooleanJunta::Parity))?;
    let src = lib(SampleSource::classical(&truth))?;
    let cfg = learn_config(100_000, ctx.exec);
    let mut hits = 0;
    for seed in 0..20 {
        let (_, rep) = lib(junta_learn(&src, 2, &cfg, ctx.streams.seed() + seed))?;
        hits += usize::from(rep.chosen_j.as_deref() == Some(&[0, 2][..]));
        let bound = rep.bound_pathwise.unwrap_or(f64::NAN);
        ensure(rep.exact_loss <= bound + 1e-8, || format!("seed {seed}: loss {} above {bound}", rep.exact_loss))?;
    }
    ensure(hits >= 18, || format!("planted pair chosen in {hits}/20 runs"))?;
    Ok(format!("planted pair chosen in {hits}/20 runs"))
}

fn loss_consistency(ctx: &Ctx) -> Result<String, String> {
    let mut r = ctx.rng(11);
    let bell = bell_example()?;
    let bell_pred = lib(build_predictor_with(lib(bell.fourier_table())?, &lib(DegreeSet::full(2))?, DEFAULT_ZERO_TOL, ctx.tie))?;
    let mut pairs = vec![(bell, bell_pred)];
    for d in [1usize, 2, 2, 3] {
        let src = lib(SampleSource::noisy(&random_sign(&mut r, 1 << d), 0.15))?;
        pairs.push((src, lib(Predictor::from_sign_operator(random_sign(&mut r, 1 << d)))?));
    }
    let n = 100_000;
    for (i, (src, pred)) in pairs.iter().enumerate() {
        let l = lib(exact_loss(pred, src))?;
        let tol = 4.0 * (l * (1.0 - l) / n as f64 + 1e-6).sqrt();
        for seed in 0..20 {
            let e = lib(empirical_loss(pred, src, n, &ctx.streams.child(100 * i as u64 + seed), ctx.exec))?;
            ensure((e - l).abs() <= tol, || format!("pair {i} seed {seed}: empirical {e} vs exact {l}"))?;
        }
    }
    Ok("5 pairs × 20 seeds".into())
}
