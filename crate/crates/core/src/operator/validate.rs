use std::fmt;

use super::{hermitian_eig, ComplexMatrix, HermitianOperator, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotHermitian,
    Negative,
    Trace,
    Resolution,
    Empty,
    DimensionMismatch,
    Eigensolver,
}

/// A failed validity check, naming the invariant and its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the offending POVM effect, when applicable.
    pub effect: Option<usize>,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NotHermitian => "not Hermitian",
            ViolationKind::Negative => "negative eigenvalue",
            ViolationKind::Trace => "trace differs from 1",
            ViolationKind::Resolution => "effects do not sum to identity",
            ViolationKind::Empty => "no effects",
            ViolationKind::DimensionMismatch => "effect dimensions differ",
            ViolationKind::Eigensolver => "eigensolver failed",
        };
        match self.effect {
            Some(i) => write!(f, "effect {i}: {what} (residual {:e})", self.residual),
            None => write!(f, "{what} (residual {:e})", self.residual),
        }
    }
}

impl std::error::Error for Violation {}

fn violation(kind: ViolationKind, effect: Option<usize>, residual: f64) -> Violation {
    Violation { kind, effect, residual }
}

fn check_positive(m: &ComplexMatrix, tol: &Tolerances, effect: Option<usize>) -> Result<(), Violation> {
    let dev = m.hermitian_deviation();
    if !dev.is_finite() || dev > tol.hermitian {
        return Err(violation(ViolationKind::NotHermitian, effect, dev));
    }
    let h = HermitianOperator::from_hermitian(m.hermitian_part());
    let spec = hermitian_eig(&h).map_err(|_| violation(ViolationKind::Eigensolver, effect, f64::NAN))?;
    let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.nonnegative {
        return Err(violation(ViolationKind::Negative, effect, min));
    }
    Ok(())
}

pub fn validate_density(rho: &ComplexMatrix) -> Result<(), Violation> {
    validate_density_with(rho, &Tolerances::default())
}

pub fn validate_density_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<(), Violation> {
    let dev = rho.hermitian_deviation();
    if !dev.is_finite() || dev > tol.hermitian {
        return Err(violation(ViolationKind::NotHermitian, None, dev));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > tol.trace {
        return Err(violation(ViolationKind::Trace, None, tr - 1.0));
    }
    check_positive(rho, tol, None)
}

pub fn validate_povm(effects: &[ComplexMatrix]) -> Result<(), Violation> {
    validate_povm_with(effects, &Tolerances::default())
}

pub fn validate_povm_with(effects: &[ComplexMatrix], tol: &Tolerances) -> Result<(), Violation> {
    let first = effects.first().ok_or(violation(ViolationKind::Empty, None, 0.0))?;
    let n = first.dim();
    let mut sum = ComplexMatrix::zeros(n);
    for (i, e) in effects.iter().enumerate() {
        if e.dim() != n {
            return Err(violation(ViolationKind::DimensionMismatch, Some(i), e.dim() as f64));
        }
        check_positive(e, tol, Some(i))?;
        sum = sum.add(e);
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(n));
    if residual > tol.povm {
        return Err(violation(ViolationKind::Resolution, None, residual));
    }
    Ok(())
}
