use crate::exec::Exec;
use crate::operator::{sign_operator_with, ComplexMatrix, HermitianOperator, SignTie, DEFAULT_ZERO_TOL};
use crate::pauli::{fourier_transform_full, synthesize, DegreeSet, FourierTable};
use crate::simulator::BinaryPovm;
use crate::{Error, Result};

/// Tolerance for `G² = I` on a predictor operator.
pub const PREDICTOR_TOL: f64 = 1e-8;

/// A learned sharp two-outcome measurement `{Π0, Π1}` with operator
/// representation `G = Π1 − Π0`, so `Π1 = ½(I + G)` and `Π0 = ½(I − G)`.
#[derive(Debug, Clone)]
pub struct Predictor {
    povm: BinaryPovm,
    g: HermitianOperator,
    degenerate: bool,
}

impl Predictor {
    pub fn from_sign_operator(g: HermitianOperator) -> Result<Self> {
        let residual = g.involution_residual();
        if residual > PREDICTOR_TOL {
            return Err(Error::NotSignOperator { residual });
        }
        Ok(Self { povm: BinaryPovm::from_observable(&g)?, g, degenerate: false })
    }

    pub(crate) fn flagged(mut self, degenerate: bool) -> Self {
        self.degenerate = degenerate;
        self
    }

    pub fn g_op(&self) -> &HermitianOperator {
        &self.g
    }

    /// `Π1`, the effect reporting label 1.
    pub fn pi1(&self) -> &HermitianOperator {
        self.povm.plus()
    }

    /// `Π0`, the effect reporting label 0.
    pub fn pi0(&self) -> &HermitianOperator {
        self.povm.minus()
    }

    pub fn povm(&self) -> &BinaryPovm {
        &self.povm
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// The estimate it was built from was identically zero, so `G = I`
    /// by the tie-break rule.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Fourier table of `G` over all strings.
    pub fn fourier_table(&self, exec: Exec) -> Result<FourierTable> {
        fourier_transform_full(self.g.matrix(), exec)
    }
}

/// `sign[Σ_{s∈A} f̂_s σ^s]` with the default zero band, ties to +1.
pub fn build_predictor(table: &FourierTable, set: &DegreeSet) -> Result<Predictor> {
    build_predictor_with(table, set, DEFAULT_ZERO_TOL, SignTie::Positive)
}

pub fn build_predictor_with(table: &FourierTable, set: &DegreeSet, zero_tol: f64, tie: SignTie) -> Result<Predictor> {
    if table.d() != set.d() {
        return Err(Error::DimensionMismatch { expected: set.d(), got: table.d() });
    }
    let restricted = table.restrict_to(set);
    let degenerate = restricted.iter().all(|(_, v)| v == 0.0);
    let f_hat = synthesize(&restricted)?;
    let g = sign_operator_with(&f_hat, zero_tol, tie)?;
    Ok(Predictor::from_sign_operator(g)?.flagged(degenerate))
}

/// Bits of `x` at `coords` packed with `coords[0]` most significant.
fn gather(x: usize, d: usize, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| acc << 1 | (x >> (d - 1 - c) & 1))
}

/// `G̃` on the qubits `coords`, identity on the rest of a `d`-qubit system.
pub fn embed(g: &ComplexMatrix, coords: &[usize], d: usize) -> Result<ComplexMatrix> {
    let k = coords.len();
    if g.dim() != 1 << k {
        return Err(Error::DimensionMismatch { expected: 1 << k, got: g.dim() });
    }
    if coords.iter().any(|&c| c >= d) || coords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("coordinates must be strictly increasing and below d"));
    }
    let n = crate::pauli::dense_dim(d)?;
    let inside = coords.iter().fold(0usize, |m, &c| m | 1 << (d - 1 - c));
    let proj: Vec<usize> = (0..n).map(|x| gather(x, d, coords)).collect();
    Ok(ComplexMatrix::from_fn(n, |r, c| if r & !inside == c & !inside { g[(proj[r], proj[c])] } else { Default::default() }))
}
