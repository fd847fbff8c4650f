//! Dense operator substrate.

mod eig;
mod matrix;
mod norms;
mod validate;

pub use eig::{hermitian_eig, jacobi_eig, tridiagonal_eig, Spectrum, JACOBI_MAX_DIM};
pub use matrix::{ComplexMatrix, MAX_DIM};
pub use norms::{
    hs_inner, normalized_trace_norm, rho_inner_product, rho_norm, sign_operator, sign_operator_with, NormOrder, SignTie, DEFAULT_ZERO_TOL,
};
pub use validate::{validate_density, validate_density_with, validate_povm, validate_povm_with, Violation, ViolationKind};

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Numerical tolerances used by validation. Defaults match the documented
/// contract; every check has a `_with` variant taking an explicit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub nonnegative: f64,
    pub reconstruction: f64,
    pub povm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermitian: 1e-10, trace: 1e-10, nonnegative: 1e-10, reconstruction: 1e-8, povm: 1e-8 }
    }
}

/// A matrix equal to its adjoint (within `Tolerances::hermitian`).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Validates Hermiticity and stores the exact Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::new_with_tol(m, Tolerances::default().hermitian)
    }

    pub fn new_with_tol(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if m.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// For matrices Hermitian by construction; symmetrizes away rounding.
    pub(crate) fn from_hermitian(m: ComplexMatrix) -> Self {
        debug_assert!(m.hermitian_deviation() < 1e-6);
        Self(m.hermitian_part())
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diag(diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn eig(&self) -> Result<Spectrum> {
        hermitian_eig(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.scale(k))
    }

    /// tr{self · other}, real for Hermitian pairs.
    pub fn trace_product(&self, other: &ComplexMatrix) -> f64 {
        self.0.trace_product_re(other)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.kron(&other.0)?))
    }

    /// `‖A² − I‖_max`
    pub fn involution_residual(&self) -> f64 {
        let sq = self.0.matmul(&self.0);
        sq.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// Hermitian, unit-trace, nonnegative operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(ComplexMatrix);

impl DensityOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::default())
    }

    pub fn new_with(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        validate_density_with(&m, tol)?;
        Ok(Self(m.hermitian_part()))
    }

    /// For matrices valid by construction (e.g. post-measurement states).
    pub(crate) fn from_valid(m: ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized, nonzero) vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::invalid("pure state vector must be nonzero and finite"));
        }
        let m = ComplexMatrix::outer(psi, psi).scale(1.0 / norm2);
        matrix::check_dim(m.dim())?;
        Ok(Self(m))
    }

    /// Basis state |index⟩⟨index| in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }
}

/// Kronecker product of two operators.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Trace over the last qubit (the label register) of a matrix on `2m` levels.
pub fn partial_trace_last_qubit(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("dimension {n} is not divisible by 2")));
    }
    let h = n / 2;
    Ok(ComplexMatrix::from_fn(h, |r, c| m[(2 * r, 2 * c)] + m[(2 * r + 1, 2 * c + 1)]))
}

/// `tr_Y{ρ_XY}` for a joint state whose last tensor factor is the label qubit.
pub fn partial_trace_y(rho_xy: &DensityOperator) -> Result<DensityOperator> {
    Ok(DensityOperator::from_valid(partial_trace_last_qubit(rho_xy.matrix())?))
}
