//! Learning two-outcome quantum measurements from labeled quantum samples
//! through the Pauli Fourier expansion.
//!
//! The crate is organized bottom-up:
//!
//! - [`operator`]: dense complex matrices, Hermitian and density operators,
//!   an in-house Hermitian eigensolver, the operator sign function and the
//!   ρ-weighted inner products and norms.
//! - [`pauli`]: Pauli strings, degree sets, Fourier tables, coefficient
//!   extraction and synthesis, and the classical Boolean embedding.
//! - [`compatibility`]: commutation graphs, clique covers, the cover score
//!   and batch allocation.
//! - [`simulator`]: sample sources, the labeling operator, estimation
//!   observables and the seeded measurement engine.
//! - [`learner`]: Fourier estimation, predictors, the low-degree and junta
//!   learners, losses and bound calculators.
//! - [`verify`]: invariant suites runnable as a single command.
//!
//! Hot loops run on rayon when the `parallel` feature is enabled (the
//! default) and fall back to plain iterators otherwise; see [`exec`].

pub mod compatibility;
pub mod error;
pub mod exec;
pub mod learner;
pub mod operator;
pub mod pauli;
pub mod rng;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
