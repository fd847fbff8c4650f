//! The operator sign function and ρ-weighted inner products and norms.

use num_complex::Complex64 as C64;

use super::{hermitian_eig, ComplexMatrix, DensityOperator, HermitianOperator};
use crate::{Error, Result};

/// Eigenvalues with magnitude at most this are treated as zero by [`sign_operator`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Where eigenvalues inside the zero band are sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignTie {
    #[default]
    Positive,
    Negative,
}

/// `sign[H]` with the default zero band and ties sent to +1.
pub fn sign_operator(h: &HermitianOperator) -> Result<HermitianOperator> {
    sign_operator_with(h, DEFAULT_ZERO_TOL, SignTie::Positive)
}

pub fn sign_operator_with(h: &HermitianOperator, zero_tol: f64, tie: SignTie) -> Result<HermitianOperator> {
    if zero_tol.is_nan() || zero_tol < 0.0 {
        return Err(Error::invalid(format!("zero tolerance must be nonnegative, got {zero_tol}")));
    }
    let tie_value = match tie {
        SignTie::Positive => 1.0,
        SignTie::Negative => -1.0,
    };
    let spectrum = hermitian_eig(h)?;
    let g = spectrum.map(|l| {
        if l > zero_tol {
            1.0
        } else if l < -zero_tol {
            -1.0
        } else {
            tie_value
        }
    });
    Ok(HermitianOperator::from_hermitian(g))
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// `⟨A, B⟩_ρ = tr{A† B ρ}`
pub fn rho_inner_product(a: &ComplexMatrix, b: &ComplexMatrix, rho: &DensityOperator) -> Result<C64> {
    let n = a.dim();
    check_same(n, b.dim())?;
    check_same(n, rho.dim())?;
    let br = b.matmul(rho.matrix());
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += a[(j, i)].conj() * br[(j, i)];
        }
    }
    Ok(acc)
}

/// Hilbert-Schmidt inner product `tr{A† B}`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    check_same(a.dim(), b.dim())?;
    Ok(a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    One,
    Two,
}

/// `‖A‖_{q,ρ} = tr{|A|^q ρ}^{1/q}` for q ∈ {1, 2}.
pub fn rho_norm(a: &HermitianOperator, q: NormOrder, rho: &DensityOperator) -> Result<f64> {
    check_same(a.dim(), rho.dim())?;
    match q {
        NormOrder::One => {
            let spectrum = hermitian_eig(a)?;
            let weights = spectrum.expectations(rho.matrix());
            let v: f64 = spectrum.eigenvalues.iter().zip(&weights).map(|(l, w)| l.abs() * w).sum();
            Ok(v.max(0.0))
        }
        NormOrder::Two => {
            let m = a.matrix();
            let v = rho_inner_product(m, m, rho)?.re;
            Ok(v.max(0.0).sqrt())
        }
    }
}

/// Trace norm scaled by the dimension, `Σ|λ_i| / dim`; equals `‖A‖_{1,I/dim}`.
pub fn normalized_trace_norm(a: &HermitianOperator) -> Result<f64> {
    let spectrum = hermitian_eig(a)?;
    Ok(spectrum.eigenvalues.iter().map(|l| l.abs()).sum::<f64>() / a.dim() as f64)
}
