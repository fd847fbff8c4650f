use num_complex::Complex64 as C64;
use rand::Rng;

use super::{label_sign, labeling_operator, LabeledSample};
use crate::compatibility::pauli_commute;
use crate::operator::{validate_povm_with, ComplexMatrix, DensityOperator, HermitianOperator, Tolerances};
use crate::pauli::PauliString;
use crate::{Error, Result};

/// Probabilities within this of [0, 1] are clamped; anything further out is
/// a hard error.
pub const CLAMP_TOL: f64 = 1e-9;

fn clamp_probability(p: f64) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&p) {
        return Err(Error::NegativeProbability(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// A sharp two-outcome measurement with outcomes +1 (`plus`) and −1 (`minus`).
#[derive(Debug, Clone)]
pub struct BinaryPovm {
    plus: HermitianOperator,
    minus: HermitianOperator,
}

impl BinaryPovm {
    /// Validates positivity, completeness and idempotence.
    pub fn new(plus: HermitianOperator, minus: HermitianOperator) -> Result<Self> {
        let tol = Tolerances::default();
        validate_povm_with(&[plus.matrix().clone(), minus.matrix().clone()], &tol)?;
        let residual = plus.matrix().matmul(plus.matrix()).max_abs_diff(plus.matrix());
        if residual > tol.povm {
            return Err(Error::invalid(format!("effect is not a projection (residual {residual:e})")));
        }
        Ok(Self { plus, minus })
    }

    /// `{½(I + O), ½(I − O)}` for an observable with `O² = I`.
    pub fn from_observable(o: &HermitianOperator) -> Result<Self> {
        let residual = o.involution_residual();
        if residual > 1e-8 {
            return Err(Error::NotSignOperator { residual });
        }
        Ok(Self::from_involution(o))
    }

    pub(crate) fn from_involution(o: &HermitianOperator) -> Self {
        let id = HermitianOperator::identity(o.dim());
        Self { plus: id.add(o).scale(0.5), minus: id.sub(o).scale(0.5) }
    }

    pub fn plus(&self) -> &HermitianOperator {
        &self.plus
    }

    pub fn minus(&self) -> &HermitianOperator {
        &self.minus
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    /// `tr{Λ_{+1} ρ}`, clamped.
    pub fn probability_plus(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: rho.dim() });
        }
        clamp_probability(self.plus.trace_product(rho.matrix()))
    }
}

/// Outcome of [`measure`].
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: i8,
    pub probability: f64,
    pub post_state: DensityOperator,
}

/// Samples outcome `v` with probability `tr{Λ_v ρ}` and collapses to
/// `Λ_v ρ Λ_v / tr{Λ_v ρ}`.
pub fn measure<R: Rng + ?Sized>(rho: &DensityOperator, povm: &BinaryPovm, rng: &mut R) -> Result<Measurement> {
    let p_plus = povm.probability_plus(rho)?;
    let u: f64 = rng.random();
    let (outcome, effect, p) = if u < p_plus { (1, povm.plus(), p_plus) } else { (-1, povm.minus(), 1.0 - p_plus) };
    let e = effect.matrix();
    let post = e.matmul(rho.matrix()).matmul(e).scale(1.0 / p);
    Ok(Measurement { outcome, probability: p, post_state: DensityOperator::from_valid(post) })
}

/// `Λ^s_{±1} = ½(I ± σ^s F_Y)` on the joint system, label qubit last.
pub fn estimation_observable(s: &PauliString) -> Result<BinaryPovm> {
    let fy = labeling_operator(s.d())?;
    let obs = s.matrix()?.matrix().kron(&ComplexMatrix::identity(2))?.matmul(fy.matrix());
    Ok(BinaryPovm::from_involution(&HermitianOperator::from_hermitian(obs)))
}

/// Pauli strings checked to commute pairwise, measured jointly on one sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleBatch {
    strings: Vec<PauliString>,
    /// Every XOR combination of the strings' x-masks.
    span: Vec<usize>,
    /// Position in `span` of each mask in it, `u32::MAX` elsewhere. Empty
    /// above the dense cap.
    span_index: Vec<u32>,
}

fn x_span(strings: &[PauliString]) -> Vec<usize> {
    let mut span = vec![0usize];
    for s in strings {
        let x = s.x_mask() as usize;
        if !span.contains(&x) {
            let extra: Vec<usize> = span.iter().map(|v| v ^ x).collect();
            span.extend(extra);
        }
    }
    span
}

impl CompatibleBatch {
    pub fn new(strings: Vec<PauliString>) -> Result<Self> {
        let first = strings.first().ok_or_else(|| Error::invalid("empty measurement batch"))?;
        let d = first.d();
        for (i, s) in strings.iter().enumerate() {
            if s.d() != d {
                return Err(Error::DimensionMismatch { expected: d, got: s.d() });
            }
            for t in &strings[i + 1..] {
                if !pauli_commute(s, t)? {
                    return Err(Error::NonCommuting { a: s.to_string(), b: t.to_string() });
                }
            }
        }
        let span = x_span(&strings);
        let span_index = match crate::pauli::dense_dim(d) {
            Ok(n) => {
                let mut index = vec![u32::MAX; n];
                for (k, &v) in span.iter().enumerate() {
                    index[v] = k as u32;
                }
                index
            }
            Err(_) => Vec::new(),
        };
        Ok(Self { strings, span, span_index })
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn d(&self) -> usize {
        self.strings[0].d()
    }

    fn slot(&self, mask: usize) -> usize {
        self.span_index[mask] as usize
    }
}

/// The entries `M[i, i⊕v]`, `v` in the batch's x-span, of `M = Qρ/tr{Qρ}`
/// where `Q` is the product of the projections applied so far. Since every
/// projection commutes with the remaining strings and squares to itself,
/// `tr{σ^t QρQ} = tr{σ^t Qρ}`, so these entries determine every later
/// outcome law without forming the collapsed state.
struct Tracked<'a> {
    batch: &'a CompatibleBatch,
    width: usize,
    m: Vec<C64>,
}

impl<'a> Tracked<'a> {
    fn new(rho: &ComplexMatrix, batch: &'a CompatibleBatch) -> Self {
        let width = batch.span.len();
        let n = rho.dim();
        let mut m = Vec::with_capacity(n * width);
        for i in 0..n {
            m.extend(batch.span.iter().map(|&v| rho[(i, i ^ v)]));
        }
        Self { batch, width, m }
    }

    /// `tr{σ^s M} = Σ_i M[i, i⊕x] φ(i)`
    fn expectation(&self, s: &PauliString) -> f64 {
        let k = self.batch.slot(s.x_mask() as usize);
        self.m.chunks_exact(self.width).enumerate().map(|(i, row)| (row[k] * s.phase(i)).re).sum()
    }

    /// `M ← ½(I + cσ^s) M / p` using `(σ^s M)[i, j] = φ(i⊕x) M[i⊕x, j]`.
    fn project(&mut self, s: &PauliString, c: f64, p: f64) {
        let x = s.x_mask() as usize;
        let w = self.width;
        let shifted: Vec<usize> = self.batch.span.iter().map(|&v| self.batch.slot(v ^ x)).collect();
        let k = 0.5 / p;
        let old = std::mem::take(&mut self.m);
        self.m = Vec::with_capacity(old.len());
        for i in 0..old.len() / w {
            let ix = i ^ x;
            let ph = s.phase(ix) * c;
            let (row, other) = (&old[i * w..(i + 1) * w], &old[ix * w..(ix + 1) * w]);
            self.m.extend((0..w).map(|kk| (row[kk] + ph * other[shifted[kk]]) * k));
        }
    }
}

/// Measures every `Λ^{s_ℓ}` of the batch on one sample in sequence,
/// collapsing between measurements. Because the effects commute, the joint
/// law equals that of the reference measurement `Γ_w = Π_ℓ Λ^{s_ℓ}_{w_ℓ}`.
///
/// Works on the X block only: on `ρ_y ⊗ |y⟩⟨y|` the observable `σ^s F_Y`
/// acts as `c_y σ^s` with `c_y = −(−1)^y`. Each step costs `O(2^d · 2^r)`
/// with `r` the rank of the batch's x-masks.
pub fn measure_batch<R: Rng + ?Sized>(sample: &LabeledSample, batch: &CompatibleBatch, rng: &mut R) -> Result<Vec<i8>> {
    let n = sample.state.dim();
    if batch.span_index.len() != n {
        return Err(Error::DimensionMismatch { expected: batch.span_index.len(), got: n });
    }
    let cy = label_sign(sample.label);
    let mut state = Tracked::new(sample.state.matrix(), batch);
    let last = batch.len() - 1;
    let mut out = Vec::with_capacity(batch.len());
    for (l, s) in batch.strings().iter().enumerate() {
        let p_plus = clamp_probability(0.5 * (1.0 + cy * state.expectation(s)))?;
        let u: f64 = rng.random();
        let (w, p) = if u < p_plus { (1i8, p_plus) } else { (-1i8, 1.0 - p_plus) };
        out.push(w);
        if l < last {
            state.project(s, cy * w as f64, p);
        }
    }
    Ok(out)
}
