use thiserror::Error;

use crate::operator::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    EigNoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid operator: {0}")]
    Invalid(#[from] Violation),

    #[error("operator is not a sign operator: ‖F² − I‖_max = {residual:e}")]
    NotSignOperator { residual: f64 },

    #[error("Fourier coefficient of {string} has imaginary residue {residue:e}")]
    ImaginaryResidue { string: String, residue: f64 },

    #[error("Pauli strings {a} and {b} do not commute")]
    NonCommuting { a: String, b: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("measurement probability {0:e} is negative beyond numerical tolerance")]
    NegativeProbability(f64),

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
