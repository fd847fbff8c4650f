use std::sync::{Arc, OnceLock};

use rand::Rng;

use super::{label_sign, LabeledSample};
use crate::exec::Exec;
use crate::operator::{normalized_trace_norm, ComplexMatrix, DensityOperator, HermitianOperator, Tolerances};
use crate::pauli::{classical_embedding, fourier_transform, fourier_transform_full, DegreeSet, FourierTable, PauliString};
use crate::{Error, Result};

/// Tolerance for `F² = I` when building a realizable source.
pub const SIGN_TOL: f64 = 1e-8;

/// Tolerance for the maximally mixed marginal check.
pub const MARGINAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Realizable,
    Noisy,
    Classical,
    Custom,
}

impl std::fmt::Display for SourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SourceKind::Realizable => "realizable",
            SourceKind::Noisy => "noisy",
            SourceKind::Classical => "classical",
            SourceKind::Custom => "custom",
        })
    }
}

/// One atom of the sample distribution: with probability `weight` the draw
/// is `(state, label)`.
#[derive(Debug, Clone)]
pub struct SourceComponent {
    pub weight: f64,
    pub label: u8,
    pub state: Arc<DensityOperator>,
}

/// The unknown distribution over labeled states `(ρ_y, y)`.
#[derive(Debug)]
pub struct SampleSource {
    d: usize,
    kind: SourceKind,
    components: Vec<SourceComponent>,
    p0: f64,
    rho0: Arc<DensityOperator>,
    rho1: Arc<DensityOperator>,
    signed: HermitianOperator,
    maximally_mixed: bool,
    degenerate: bool,
    known_table: Option<FourierTable>,
    known_opt: Option<f64>,
    full_table: OnceLock<FourierTable>,
    optimum: OnceLock<f64>,
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn qubits(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::invalid(format!("dimension {dim} is not a power of two ≥ 2")));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl SampleSource {
    fn assemble(d: usize, kind: SourceKind, components: Vec<SourceComponent>) -> Result<Self> {
        let dim = 1usize << d;
        let mut signed = ComplexMatrix::zeros(dim);
        let mut marginal = ComplexMatrix::zeros(dim);
        let (mut w0, mut w1) = (0.0, 0.0);
        let (mut m0, mut m1) = (ComplexMatrix::zeros(dim), ComplexMatrix::zeros(dim));
        for c in &components {
            signed.axpy(c.weight * label_sign(c.label), c.state.matrix());
            marginal.axpy(c.weight, c.state.matrix());
            if c.label == 0 {
                w0 += c.weight;
                m0.axpy(c.weight, c.state.matrix());
            } else {
                w1 += c.weight;
                m1.axpy(c.weight, c.state.matrix());
            }
        }
        let placeholder = || Arc::new(DensityOperator::maximally_mixed(dim));
        let rho0 = if w0 > 0.0 { Arc::new(DensityOperator::from_valid(m0.scale(1.0 / w0))) } else { placeholder() };
        let rho1 = if w1 > 0.0 { Arc::new(DensityOperator::from_valid(m1.scale(1.0 / w1))) } else { placeholder() };
        let maximally_mixed = marginal.max_abs_diff(&ComplexMatrix::identity(dim).scale(1.0 / dim as f64)) <= MARGINAL_TOL;
        Ok(Self {
            d,
            kind,
            components: components.into_iter().filter(|c| c.weight > 0.0).collect(),
            p0: w0 / (w0 + w1),
            rho0,
            rho1,
            signed: HermitianOperator::from_hermitian(signed),
            maximally_mixed,
            degenerate: w0 == 0.0 || w1 == 0.0,
            known_table: None,
            known_opt: None,
            full_table: OnceLock::new(),
            optimum: OnceLock::new(),
        })
    }

    /// Label 1 on the +1 eigenspace of the sign operator `F`, label 0 on the
    /// −1 eigenspace, each drawn with probability proportional to its
    /// dimension. The X-marginal is `I/2^d` and `f_s = 2^{-d} tr{F σ^s}`.
    pub fn realizable(f: &HermitianOperator) -> Result<Self> {
        Self::noisy(f, 0.0)
    }

    /// A realizable draw whose label is flipped with probability `eta`.
    pub fn noisy(f: &HermitianOperator, eta: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::invalid(format!("label noise must lie in [0, 0.5), got {eta}")));
        }
        let dim = f.dim();
        let d = qubits(dim)?;
        let residual = f.involution_residual();
        if residual > SIGN_TOL {
            return Err(Error::NotSignOperator { residual });
        }
        let id = ComplexMatrix::identity(dim);
        let mut plus = id.clone();
        plus.axpy(1.0, f.matrix());
        let plus = plus.scale(0.5);
        let mut minus = id;
        minus.axpy(-1.0, f.matrix());
        let minus = minus.scale(0.5);
        let (tp, tm) = (plus.trace().re, minus.trace().re);
        let mut components = Vec::new();
        // Eigenspace dimensions are integers; anything below ½ is empty.
        for (proj, tr, label) in [(&minus, tm, 0u8), (&plus, tp, 1u8)] {
            if tr < 0.5 {
                continue;
            }
            let state = Arc::new(DensityOperator::from_valid(proj.scale(1.0 / tr)));
            let w = tr / dim as f64;
            components.push(SourceComponent { weight: w * (1.0 - eta), label, state: state.clone() });
            if eta > 0.0 {
                components.push(SourceComponent { weight: w * eta, label: 1 - label, state });
            }
        }
        let kind = if eta > 0.0 { SourceKind::Noisy } else { SourceKind::Realizable };
        let mut source = Self::assemble(d, kind, components)?;
        source.known_opt = Some(eta);
        Ok(source)
    }

    /// Realizable source whose sign operator is synthesized from `table`.
    pub fn from_table(table: &FourierTable, eta: f64) -> Result<Self> {
        let f = crate::pauli::synthesize(table)?;
        let mut s = Self::noisy(&f, eta)?;
        s.known_table = Some(table.scaled(1.0 - 2.0 * eta).pruned(0.0));
        Ok(s)
    }

    /// The classical-data special case: states are computational basis
    /// mixtures and the label is `f(x)`.
    pub fn classical(truth_table: &[u8]) -> Result<Self> {
        let f = classical_embedding(truth_table)?;
        let mut s = Self::realizable(&f)?;
        s.kind = SourceKind::Classical;
        Ok(s)
    }

    /// Arbitrary priors and states.
    pub fn custom(p0: f64, rho0: DensityOperator, rho1: DensityOperator) -> Result<Self> {
        check_probability("p0", p0)?;
        if rho0.dim() != rho1.dim() {
            return Err(Error::DimensionMismatch { expected: rho0.dim(), got: rho1.dim() });
        }
        let d = qubits(rho0.dim())?;
        let (rho0, rho1) = (Arc::new(rho0), Arc::new(rho1));
        let components = vec![
            SourceComponent { weight: p0, label: 0, state: rho0.clone() },
            SourceComponent { weight: 1.0 - p0, label: 1, state: rho1.clone() },
        ];
        let mut s = Self::assemble(d, SourceKind::Custom, components)?;
        // Keep the supplied states even when their prior is zero.
        s.rho0 = rho0;
        s.rho1 = rho1;
        Ok(s)
    }

    pub fn from_matrices(p0: f64, rho0: ComplexMatrix, rho1: ComplexMatrix) -> Result<Self> {
        let tol = Tolerances::default();
        Self::custom(p0, DensityOperator::new_with(rho0, &tol)?, DensityOperator::new_with(rho1, &tol)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        1 << self.d
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }

    /// Average state given label 0 (the maximally mixed placeholder when label 0 never occurs).
    pub fn rho0(&self) -> &DensityOperator {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityOperator {
        &self.rho1
    }

    pub fn components(&self) -> &[SourceComponent] {
        &self.components
    }

    pub fn is_maximally_mixed(&self) -> bool {
        self.maximally_mixed
    }

    /// One of the labels has probability zero.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `Δ = p1 ρ1 − p0 ρ0`, the X-block of `F_Y ρ_XY`.
    pub fn signed_state(&self) -> &HermitianOperator {
        &self.signed
    }

    /// `X-marginal p0 ρ0 + p1 ρ1`.
    pub fn marginal(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim());
        for c in &self.components {
            m.axpy(c.weight, c.state.matrix());
        }
        m
    }

    /// `ρ_XY = Σ_y p_y ρ_y ⊗ |y⟩⟨y|` with the label qubit last.
    pub fn joint_state(&self) -> Result<DensityOperator> {
        let mut m = ComplexMatrix::zeros(2 * self.dim());
        for c in &self.components {
            let ket = ComplexMatrix::from_diag(if c.label == 0 { &[1.0, 0.0] } else { &[0.0, 1.0] });
            m.axpy(c.weight, &c.state.matrix().kron(&ket)?);
        }
        Ok(DensityOperator::from_valid(m))
    }

    /// `f_s = tr{F_Y σ^s ρ_XY} = tr{σ^s Δ}`.
    pub fn coefficient(&self, s: &PauliString) -> Result<f64> {
        if s.d() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: s.d() });
        }
        Ok(s.trace_with(self.signed.matrix())?.re)
    }

    /// Ground-truth coefficients on `set`.
    pub fn table_on(&self, set: &DegreeSet, exec: Exec) -> Result<FourierTable> {
        Ok(fourier_transform(self.signed.matrix(), set, exec)?.scaled(self.dim() as f64))
    }

    /// All `4^d` ground-truth coefficients, computed once.
    pub fn fourier_table(&self) -> Result<&FourierTable> {
        if let Some(t) = self.full_table.get() {
            return Ok(t);
        }
        let t = fourier_transform_full(self.signed.matrix(), Exec::default())?.scaled(self.dim() as f64);
        Ok(self.full_table.get_or_init(|| t))
    }

    /// The table the source was built from, when there is one.
    pub fn known_table(&self) -> Option<&FourierTable> {
        self.known_table.as_ref()
    }

    /// Minimum mislabeling probability over all measurements,
    /// `½ − ½‖p1ρ1 − p0ρ0‖_1`.
    pub fn optimal_loss(&self) -> Result<f64> {
        if let Some(&v) = self.optimum.get() {
            return Ok(v);
        }
        let v = match self.known_opt {
            Some(v) => v,
            None => {
                let norm = normalized_trace_norm(&self.signed)? * self.dim() as f64;
                (0.5 - 0.5 * norm).clamp(0.0, 1.0)
            }
        };
        Ok(*self.optimum.get_or_init(|| v))
    }

    /// Index into [`SampleSource::components`] of one iid draw.
    pub fn draw_component<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, c) in self.components.iter().enumerate() {
            acc += c.weight;
            if u < acc {
                return i;
            }
        }
        self.components.len() - 1
    }

    /// One iid draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> LabeledSample {
        let c = &self.components[self.draw_component(rng)];
        LabeledSample { label: c.label, state: c.state.clone() }
    }
}

/// Draws `n` samples, sample `i` on stream `(Draw, i)`.
pub fn draw_samples(source: &SampleSource, n: usize, streams: &crate::rng::RngStreams, exec: Exec) -> Vec<LabeledSample> {
    exec.map(n, |i| source.draw(&mut streams.stream(crate::rng::Domain::Draw, i as u64)))
}

/// `draw_sample(source, rng)`
pub fn draw_sample<R: Rng + ?Sized>(source: &SampleSource, rng: &mut R) -> LabeledSample {
    source.draw(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStreams;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn realizable_from_z() {
        let z = ps("3").matrix().unwrap();
        let s = SampleSource::realizable(&z).unwrap();
        assert_eq!(s.p1(), 0.5);
        assert_eq!(s.rho1().matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));
        assert_eq!(s.coefficient(&ps("3")).unwrap(), 1.0);
        assert_eq!(s.coefficient(&ps("1")).unwrap(), 0.0);
        assert!(s.is_maximally_mixed());
        assert!(!s.is_degenerate());
        assert_eq!(s.optimal_loss().unwrap(), 0.0);
    }

    #[test]
    fn identity_is_degenerate() {
        let s = SampleSource::realizable(&HermitianOperator::identity(4)).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.p0(), 0.0);
        let mut rng = RngStreams::new(1).stream(crate::rng::Domain::Draw, 0);
        assert!((0..100).all(|_| s.draw(&mut rng).label == 1));
    }

    #[test]
    fn rejects_non_sign_operator() {
        let h = HermitianOperator::from_diag(&[1.0, 0.5]);
        assert!(matches!(SampleSource::realizable(&h), Err(Error::NotSignOperator { .. })));
        assert!(SampleSource::noisy(&HermitianOperator::identity(2), 0.5).is_err());
    }

    #[test]
    fn noisy_scales_coefficients() {
        let z = ps("3").matrix().unwrap();
        let s = SampleSource::noisy(&z, 0.25).unwrap();
        assert!((s.coefficient(&ps("3")).unwrap() - 0.5).abs() < 1e-15);
        assert!(s.is_maximally_mixed());
        assert_eq!(s.optimal_loss().unwrap(), 0.25);
        assert_eq!(s.kind(), SourceKind::Noisy);
    }

    #[test]
    fn uninformative_custom_source() {
        let mm = DensityOperator::maximally_mixed(4);
        let s = SampleSource::custom(0.3, mm.clone(), mm).unwrap();
        assert!((s.optimal_loss().unwrap() - 0.3).abs() < 1e-12);
        assert!((s.coefficient(&ps("00")).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(s.coefficient(&ps("12")).unwrap(), 0.0);
    }

    #[test]
    fn full_table_matches_direct_coefficients() {
        let parity = SampleSource::classical(&[0, 1, 1, 0]).unwrap();
        let t = parity.fourier_table().unwrap();
        assert_eq!(t.len(), 16);
        for (s, v) in t.iter() {
            assert!((v - parity.coefficient(s).unwrap()).abs() < 1e-15);
        }
        assert!((t.get(&ps("33")) + 1.0).abs() < 1e-15);
    }
}
