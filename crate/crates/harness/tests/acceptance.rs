//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one line; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qfl_core::compatibility::{allocate_batches, best_cover, Cover, CoverStrategy};
use qfl_core::exec::Exec;
use qfl_core::learner::{
    build_predictor, chernoff_band, exact_loss, fourier_estimation, junta_learn, opt_k, qld_learn, LearnConfig, Predictor,
};
use qfl_core::operator::{rho_inner_product, rho_norm, sign_operator, ComplexMatrix, DensityOperator, HermitianOperator, NormOrder};
use qfl_core::pauli::{classical_embedding, fourier_transform_full, synthesize, DegreeSet, PauliString};
use qfl_core::rng::RngStreams;
use qfl_core::simulator::{draw_samples, junta_truth_table, measure_batch, BooleanJunta, CompatibleBatch, LabeledSample, SampleSource};
use qfl_core::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: qfl_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense Pauli matrix as a Kronecker product of 2×2 factors, leftmost
/// factor first.
fn pauli_oracle(symbols: &[u8]) -> ComplexMatrix {
    let factor = |sym: u8| {
        let z = c(0.0, 0.0);
        let v = match sym {
            0 => [c(1.0, 0.0), z, z, c(1.0, 0.0)],
            1 => [z, c(1.0, 0.0), c(1.0, 0.0), z],
            2 => [z, c(0.0, -1.0), c(0.0, 1.0), z],
            _ => [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
        };
        ComplexMatrix::from_vec(2, v.to_vec()).unwrap()
    };
    symbols.iter().fold(ComplexMatrix::identity(1), |acc, &s| acc.kron(&factor(s)).unwrap())
}

/// Product skipping zero entries of the left factor.
fn sparse_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    out
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.dim();
    (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| a[(i, k)] * b[(k, i)]).sum()
}

fn all_strings(d: usize) -> Vec<Vec<u8>> {
    (0..1usize << (2 * d)).map(|code| (0..d).map(|l| ((code >> (2 * (d - 1 - l))) & 3) as u8).collect()).collect()
}

fn string(symbols: &[u8]) -> PauliString {
    PauliString::new(symbols).unwrap()
}

fn random_matrix(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

fn random_hermitian(r: &mut StdRng, dim: usize) -> HermitianOperator {
    let m = random_matrix(r, dim);
    HermitianOperator::new(m.add(&m.adjoint()).scale(0.5)).unwrap()
}

fn random_density(r: &mut StdRng, dim: usize) -> DensityOperator {
    let a = random_matrix(r, dim);
    let p = a.matmul(&a.adjoint());
    let t = p.trace().re;
    DensityOperator::new(p.hermitian_part().scale(1.0 / t)).unwrap()
}

/// `p0·tr{Π1 ρ0} + p1·tr{Π0 ρ1}` computed from the dense effects.
fn loss_oracle(pred: &Predictor, src: &SampleSource) -> f64 {
    src.p0() * trace_of_product(pred.pi1().matrix(), src.rho0().matrix()).re
        + src.p1() * trace_of_product(pred.pi0().matrix(), src.rho1().matrix()).re
}

fn bell_source() -> Result<SampleSource, String> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = |sign: f64| {
        let phi = [c(sign * h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        ComplexMatrix::outer(&phi, &phi).scale(0.5).add(&ComplexMatrix::from_diag(&[0.0, 0.25, 0.25, 0.0]))
    };
    ok(SampleSource::from_matrices(0.5, state(1.0), state(-1.0)))
}

fn bell_exactness() -> Outcome {
    let src = bell_source()?;
    let (v, j) = ok(opt_k(&src, 2))?;
    ensure((v - 0.25).abs() <= 1e-9, || format!("opt(2) = {v}"))?;
    ensure(j == [0, 1], || format!("opt(2) attained on {j:?}"))?;
    let pred = ok(build_predictor(ok(src.fourier_table())?, &ok(DegreeSet::full(2))?))?;
    let l = ok(exact_loss(&pred, &src))?;
    let oracle = loss_oracle(&pred, &src);
    ensure((l - 0.25).abs() <= 1e-9 && (oracle - 0.25).abs() <= 1e-9, || format!("predictor loss {l}, oracle {oracle}"))?;
    Ok(format!("opt(2) = {v:.12}, predictor loss = {l:.12}"))
}

fn fourier_correctness() -> Outcome {
    let mut r = StdRng::seed_from_u64(2);
    for d in 1..=4 {
        let strings = all_strings(d);
        let mats: Vec<ComplexMatrix> = strings.iter().map(|s| pauli_oracle(s)).collect();
        let scale = 1.0 / (1 << d) as f64;
        for (i, a) in mats.iter().enumerate() {
            for (j, b) in mats.iter().enumerate() {
                let v = trace_of_product(a, b) * scale;
                let want = if i == j { 1.0 } else { 0.0 };
                ensure((v - want).norm() <= 1e-12, || format!("d = {d}: ⟨σ{:?}, σ{:?}⟩ = {v}", strings[i], strings[j]))?;
            }
            let lib = ok(string(&strings[i]).matrix())?;
            ensure(lib.matrix().max_abs_diff(a) <= 1e-15, || format!("d = {d}: σ{:?} differs from the Kronecker product", strings[i]))?;
        }
        for _ in 0..10 {
            let a = random_hermitian(&mut r, 1 << d);
            let table = ok(fourier_transform_full(a.matrix(), Exec::default()))?;
            let mut rebuilt = ComplexMatrix::zeros(1 << d);
            for (s, m) in strings.iter().zip(&mats) {
                let direct = trace_of_product(a.matrix(), m).re * scale;
                let got = table.get(&string(s));
                ensure((got - direct).abs() <= 1e-12, || format!("d = {d}: coefficient {s:?} is {got}, direct trace {direct}"))?;
                rebuilt.axpy(direct, m);
            }
            let hs = trace_of_product(a.matrix(), a.matrix()).re * scale;
            let parseval = (table.sum_squares() - hs).abs();
            ensure(parseval <= 1e-8, || format!("d = {d}: Parseval residual {parseval:e}"))?;
            let back = ok(synthesize(&table))?;
            let rt = back.matrix().max_abs_diff(a.matrix()).max(rebuilt.max_abs_diff(a.matrix()));
            ensure(rt <= 1e-8, || format!("d = {d}: round-trip error {rt:e}"))?;
        }
    }
    Ok("orthonormality, Parseval and round trip at d ≤ 4".into())
}

fn commutation_oracle() -> Outcome {
    let dense_commute = |a: &ComplexMatrix, b: &ComplexMatrix| sparse_mul(a, b).max_abs_diff(&sparse_mul(b, a)) < 1e-12;
    let mut pairs = 0;
    for d in 1..=3 {
        let strings = all_strings(d);
        let mats: Vec<ComplexMatrix> = strings.iter().map(|s| pauli_oracle(s)).collect();
        for (i, s) in strings.iter().enumerate() {
            for (j, t) in strings.iter().enumerate() {
                let lib = string(s).commutes_with(&string(t));
                ensure(lib == dense_commute(&mats[i], &mats[j]), || format!("{s:?} and {t:?} disagree"))?;
                pairs += 1;
            }
        }
    }
    let mut r = StdRng::seed_from_u64(3);
    let mut commuting = 0;
    for _ in 0..500 {
        let s: Vec<u8> = (0..8).map(|_| r.random_range(0..4)).collect();
        let t: Vec<u8> = (0..8).map(|_| r.random_range(0..4)).collect();
        let dense = dense_commute(&pauli_oracle(&s), &pauli_oracle(&t));
        ensure(string(&s).commutes_with(&string(&t)) == dense, || format!("{s:?} and {t:?} disagree"))?;
        commuting += usize::from(dense);
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, 0 disagreements ({commuting}/500 random pairs commute)"))
}

fn estimation_concentration() -> Outcome {
    let mut r = StdRng::seed_from_u64(4);
    let f = ok(sign_operator(&random_hermitian(&mut r, 4)))?;
    let src = ok(SampleSource::realizable(&f))?;
    // The non-identity string with the largest true coefficient.
    let (sym, truth) = all_strings(2)
        .into_iter()
        .skip(1)
        .map(|s| {
            let v = trace_of_product(f.matrix(), &pauli_oracle(&s)).re / 4.0;
            (s, v)
        })
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap();
    let s = string(&sym);
    let lib = ok(src.coefficient(&s))?;
    ensure((lib - truth).abs() <= 1e-12, || format!("source coefficient {lib}, trace oracle {truth}"))?;
    let (n, delta) = (10_000, 0.05);
    let cover = ok(Cover::new(2, vec![vec![s]]))?;
    let plan = ok(allocate_batches(n, &cover, delta))?;
    let band = (8.0 / n as f64 * (2.0 / delta).ln()).sqrt();
    let mut hits = 0;
    for seed in 0..20 {
        let streams = RngStreams::new(seed);
        let samples = draw_samples(&src, n, &streams, Exec::default());
        let est = ok(fourier_estimation(&samples, &cover, &plan, &streams, Exec::default()))?.get(&s);
        hits += usize::from((est - truth).abs() <= band);
    }
    ensure(hits >= 19, || format!("{hits}/20 runs inside ±{band:.4}"))?;
    Ok(format!("σ{sym:?} with f = {truth:.4}: {hits}/20 runs inside ±{band:.4}"))
}

fn batch_equivalence() -> Outcome {
    let mut r = StdRng::seed_from_u64(5);
    let n = 100_000;
    let mut report = Vec::new();
    for (k, pair) in [[[3u8, 0], [0, 3]], [[1, 1], [2, 2]], [[1, 2], [2, 1]]].iter().enumerate() {
        let label: u8 = r.random_range(0..2);
        let rho = random_density(&mut r, 4);
        // Label y multiplies each outcome by c_y = −(−1)^y.
        let cy = if label == 0 { -1.0 } else { 1.0 };
        let id = ComplexMatrix::identity(4);
        let projector = |sym: &[u8], w: f64| id.add(&pauli_oracle(sym).scale(w * cy)).scale(0.5);
        let mut probs = Vec::new();
        for bits in 0..4usize {
            let w: Vec<f64> = (0..2).map(|l| if bits >> l & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let gamma = projector(&pair[0], w[0]).matmul(&projector(&pair[1], w[1]));
            probs.push(trace_of_product(&gamma, rho.matrix()).re);
        }
        let batch = ok(CompatibleBatch::new(vec![string(&pair[0]), string(&pair[1])]))?;
        let sample = LabeledSample { label, state: rho.into_shared() };
        let mut counts = [0usize; 4];
        let mut mr = StdRng::seed_from_u64(50 + k as u64);
        for _ in 0..n {
            let w = ok(measure_batch(&sample, &batch, &mut mr))?;
            counts[usize::from(w[0] == -1) | usize::from(w[1] == -1) << 1] += 1;
        }
        let (mut stat, mut cells) = (0.0, 0usize);
        for (&o, &p) in counts.iter().zip(&probs) {
            if p > 1e-12 {
                let e = p * n as f64;
                stat += (o as f64 - e).powi(2) / e;
                cells += 1;
            } else {
                ensure(o == 0, || format!("{pair:?}: outcome with zero probability observed"))?;
            }
        }
        let p = 1.0 - ChiSquared::new((cells - 1) as f64).map_err(|e| e.to_string())?.cdf(stat);
        ensure(p > 1e-3, || format!("{pair:?}: χ² = {stat:.2}, p = {p:e}"))?;
        report.push(format!("p = {p:.3}"));
    }
    Ok(format!("3 batches, {}", report.join(", ")))
}

fn parity_source(d: usize, eta: f64) -> Result<SampleSource, String> {
    let truth = ok(junta_truth_table(d, &[0, 2], BooleanJunta::Parity))?;
    ok(SampleSource::noisy(&ok(classical_embedding(&truth))?, eta))
}

fn qld_end_to_end() -> Outcome {
    let src = parity_source(4, 0.0)?;
    let set = ok(DegreeSet::classical_upto(4, 2))?;
    let cfg = LearnConfig { n_test: 0, ..LearnConfig::new(50_000, 0.05) };
    let (mut good, mut pathwise) = (0, 0);
    for seed in 0..20 {
        let (pred, rep) = ok(qld_learn(&src, &set, &cfg, seed))?;
        let oracle = loss_oracle(&pred, &src);
        ensure((oracle - rep.exact_loss).abs() <= 1e-9, || format!("seed {seed}: loss {} vs oracle {oracle}", rep.exact_loss))?;
        good += usize::from(oracle <= 0.05);
        pathwise += usize::from(oracle <= 5.0 * rep.beta_meas + 1e-12);
    }
    ensure(good >= 18 && pathwise == 20, || format!("{good}/20 with loss ≤ 0.05, {pathwise}/20 with loss ≤ 5β"))?;
    Ok(format!("{good}/20 with loss ≤ 0.05, {pathwise}/20 with loss ≤ 5β"))
}

fn junta_recovery() -> Outcome {
    let truth = ok(junta_truth_table(5, &[0, 2], BooleanJunta::Parity))?;
    let src = ok(SampleSource::classical(&truth))?;
    let cfg = LearnConfig { n_test: 0, ..LearnConfig::new(100_000, 0.05) };
    let (mut hits, mut bounded) = (0, 0);
    for seed in 0..20 {
        let (pred, rep) = ok(junta_learn(&src, 2, &cfg, seed))?;
        hits += usize::from(rep.chosen_j.as_deref() == Some(&[0, 2][..]));
        let opt = rep.opt_k.ok_or("no opt(k) reported")?;
        ensure(opt.abs() <= 1e-9, || format!("seed {seed}: opt(2) = {opt} for a planted pair"))?;
        // Realized ε'_n is the squared estimation error on the searched set.
        bounded += usize::from(loss_oracle(&pred, &src) <= opt + 5.0 * rep.beta_meas + 1e-12);
    }
    ensure(hits >= 18 && bounded == 20, || format!("planted pair in {hits}/20, bound met in {bounded}/20"))?;
    Ok(format!("planted pair in {hits}/20, bound met in {bounded}/20"))
}

fn noisy_behavior() -> Outcome {
    let eta = 0.1;
    let src = parity_source(4, eta)?;
    let clean = parity_source(4, 0.0)?;
    let set = ok(DegreeSet::classical_upto(4, 2))?;
    let (noisy_t, clean_t) = (ok(src.fourier_table())?, ok(clean.fourier_table())?);
    for s in ok(DegreeSet::full(4))?.iter() {
        let (a, b) = (noisy_t.get(s), (1.0 - 2.0 * eta) * clean_t.get(s));
        ensure((a - b).abs() <= 1e-12, || format!("coefficient {s}: {a} vs (1 − 2η)·{}", clean_t.get(s)))?;
    }
    let delta = 0.05;
    let cfg = LearnConfig { n_test: 0, ..LearnConfig::new(50_000, delta) };
    let mut inside = 0;
    for seed in 0..20 {
        let (pred, rep) = ok(qld_learn(&src, &set, &cfg, seed))?;
        let mut all = true;
        for (j, subset) in rep.cover.subsets().iter().enumerate() {
            let band = ok(chernoff_band(rep.plan.sizes[j], delta, subset.len()))?;
            all &= subset.iter().all(|s| (rep.estimates.get(s) - (1.0 - 2.0 * eta) * clean_t.get(s)).abs() <= band);
        }
        inside += usize::from(all);
        let l = loss_oracle(&pred, &src);
        let hi = 2.0 * eta + 5.0 * rep.beta_meas + 0.02;
        ensure(l >= eta - 1e-12 && l <= hi, || format!("seed {seed}: loss {l} outside [{eta}, {hi}]"))?;
    }
    ensure(inside >= 19, || format!("estimates inside the band in {inside}/20 runs"))?;
    Ok(format!("estimates inside the band in {inside}/20 runs, 20/20 losses inside [η, 2η + 5β + 0.02]"))
}

fn allocation_optimality() -> Outcome {
    let (n, delta) = (1000, 0.05);
    let subsets: [&[&str]; 6] = [&["300", "030", "003", "330"], &["100"], &["010"], &["001"], &["110", "220"], &["333", "303", "033"]];
    let strings = |i: usize| subsets[i].iter().map(|s| s.parse::<PauliString>().unwrap()).collect::<Vec<_>>();
    let shapes = [[0, 1, 2], [1, 2, 3], [0, 4, 5], [4, 5, 1]];
    for shape in shapes {
        let cover = ok(Cover::new(3, shape.iter().map(|&i| strings(i)).collect()))?;
        // The cover stores subsets canonically, so read sizes back from it.
        let sizes: Vec<f64> = cover.subsets().iter().map(|b| b.len() as f64).collect();
        let w: Vec<f64> = sizes.iter().map(|b| b * (2.0 * b / delta).ln()).collect();
        let objective = |x: &[usize]| w.iter().zip(x).map(|(b, &x)| b / x as f64).sum::<f64>();
        let (mut best, mut arg) = (f64::INFINITY, vec![0; 3]);
        for a in 1..n - 1 {
            for b in 1..n - a {
                let x = [a, b, n - a - b];
                let v = objective(&x);
                if v < best {
                    (best, arg) = (v, x.to_vec());
                }
            }
        }
        let plan = ok(allocate_batches(n, &cover, delta))?;
        let got = objective(&plan.sizes);
        ensure(plan.sizes.iter().sum::<usize>() == n, || format!("{:?} does not sum to {n}", plan.sizes))?;
        ensure(got <= best + 1e-12, || format!("sizes {sizes:?}: objective {got} above grid optimum {best}"))?;
        ensure(plan.sizes.iter().zip(&arg).all(|(&a, &b)| a.abs_diff(b) <= 1), || format!("plan {:?}, grid {arg:?}", plan.sizes))?;
    }
    Ok("4 covers match the grid optimum".into())
}

fn score_oracle(sizes: &[usize], n: usize, delta: f64) -> f64 {
    sizes.iter().map(|&b| (b as f64 * (2.0 * b as f64 / delta).ln()).sqrt()).sum::<f64>().powi(2) / n as f64
}

fn cover_quality() -> Outcome {
    let mut r = StdRng::seed_from_u64(10);
    let (n, delta) = (1000, 0.05);
    let mut strict = 0;
    for i in 0..20 {
        let d = r.random_range(2..=3);
        let size = r.random_range(2..=10);
        let mut syms: Vec<Vec<u8>> = Vec::new();
        while syms.len() < size {
            let s: Vec<u8> = (0..d).map(|_| r.random_range(0..4)).collect();
            if !syms.contains(&s) {
                syms.push(s);
            }
        }
        let set = ok(DegreeSet::new(d, syms.iter().map(|s| string(s))))?;
        let mut scores = Vec::new();
        for strategy in [CoverStrategy::Exhaustive, CoverStrategy::default()] {
            let cover = ok(best_cover(&set, n, delta, strategy, Exec::default()))?;
            let mut members: Vec<&PauliString> = cover.subsets().iter().flatten().collect();
            members.sort();
            ensure(members.len() == set.len() && members.windows(2).all(|w| w[0] != w[1]), || format!("instance {i}: not a partition"))?;
            for b in cover.subsets() {
                for s in b {
                    for t in b {
                        let (a, bb) = (pauli_oracle(&s.symbols()), pauli_oracle(&t.symbols()));
                        ensure(sparse_mul(&a, &bb).max_abs_diff(&sparse_mul(&bb, &a)) < 1e-12, || {
                            format!("instance {i}: {s} and {t} share a subset")
                        })?;
                    }
                }
            }
            let score = score_oracle(&cover.sizes(), n, delta);
            let lib = ok(cover.score(n, delta))?;
            ensure((score - lib).abs() <= 1e-12 * score, || format!("instance {i}: score {lib}, oracle {score}"))?;
            scores.push(score);
        }
        let singleton = score_oracle(&vec![1; set.len()], n, delta);
        let (ex, gr) = (scores[0], scores[1]);
        ensure(ex <= gr + 1e-12 && gr <= singleton + 1e-12, || format!("instance {i}: {ex} / {gr} / {singleton} out of order"))?;
        strict += usize::from(gr < singleton - 1e-12);
    }
    Ok(format!("20 graphs ordered, greedy beats singletons on {strict}"))
}

fn norm_inequalities() -> Outcome {
    let mut r = StdRng::seed_from_u64(11);
    for i in 0..50 {
        let dim = 1 << (1 + i % 3);
        let (a, b, rho) = (random_hermitian(&mut r, dim), random_hermitian(&mut r, dim), random_density(&mut r, dim));
        let two = |x: &HermitianOperator| trace_of_product(&x.matrix().matmul(x.matrix()), rho.matrix()).re.sqrt();
        let (na, nb, ns) = (two(&a), two(&b), two(&a.add(&b)));
        let lib = ok(rho_norm(&a, NormOrder::Two, &rho))?;
        ensure((lib - na).abs() <= 1e-10, || format!("instance {i}: ‖A‖₂ = {lib}, oracle {na}"))?;
        let ab = ok(rho_inner_product(a.matrix(), b.matrix(), &rho))?;
        let aa = ok(rho_inner_product(a.matrix(), a.matrix(), &rho))?;
        let n1 = ok(rho_norm(&a, NormOrder::One, &rho))?;
        ensure((ns * ns - (na * na + nb * nb + 2.0 * ab.re)).abs() <= 1e-8, || format!("instance {i}: expansion"))?;
        ensure(ab.norm() <= na * nb + 1e-10, || format!("instance {i}: Cauchy-Schwarz"))?;
        ensure(ns <= na + nb + 1e-10, || format!("instance {i}: triangle"))?;
        ensure(n1 <= na + 1e-10, || format!("instance {i}: ‖A‖₁ = {n1} above ‖A‖₂ = {na}"))?;
        ensure(aa.im.abs() <= 1e-12 && aa.re >= 0.0, || format!("instance {i}: ⟨A, A⟩ = {aa}"))?;
    }
    Ok("50 instances".into())
}

fn determinism() -> Outcome {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/noisy_parity.cfg");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut csv = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_qfl"))
            .args(["run", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap(), "--seed-override", "0..4"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
        csv.push(std::fs::read(out.join("results.csv")).map_err(|e| e.to_string())?);
    }
    ensure(csv[0] == csv[1], || "results.csv differs between runs".into())?;
    Ok(format!("results.csv identical ({} bytes)", csv[0].len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("bell example exactness", bell_exactness, Some(1)),
        ("fourier correctness", fourier_correctness, Some(30)),
        ("commutation oracle equivalence", commutation_oracle, None),
        ("estimation concentration", estimation_concentration, None),
        ("sequential-batch equivalence", batch_equivalence, None),
        ("end-to-end qld", qld_end_to_end, Some(300)),
        ("junta recovery", junta_recovery, Some(600)),
        ("noisy behavior", noisy_behavior, None),
        ("batch-allocation optimality", allocation_optimality, None),
        ("cover quality", cover_quality, None),
        ("norm inequalities", norm_inequalities, None),
        ("determinism", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let took = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if took > Duration::from_secs(*secs) {
                outcome = Err(format!("took {:.1} s, limit {secs} s", took.as_secs_f64()));
            }
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} {tag}  {name}: {detail} [{:.2} s]", i + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
