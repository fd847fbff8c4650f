//! Pauli strings, degree sets and the Pauli Fourier expansion
//! `A = Σ_s a_s σ^s` with `a_s = 2^{-d} tr{A σ^s}`.

mod degree;
mod string;
mod table;
mod transform;

pub use degree::{upto_count, DegreeSet, MAX_DEGREE_SET};
pub use string::{PauliString, MAX_QUBITS};
pub use table::FourierTable;
pub use transform::{
    classical_embedding, fourier_coefficient, fourier_transform, fourier_transform_full, pauli_traces, synthesize, IMAG_TOL,
};

pub(crate) use string::dense_dim;

/// Dense matrix of `σ^s`.
pub fn pauli_matrix(s: &PauliString) -> crate::Result<crate::operator::HermitianOperator> {
    s.matrix()
}

/// `σ^s v` without materializing the matrix.
pub fn apply_pauli(s: &PauliString, v: &[crate::C64]) -> crate::Result<Vec<crate::C64>> {
    s.apply(v)
}

/// Positions of `s` carrying a non-identity symbol.
pub fn support(s: &PauliString) -> Vec<usize> {
    s.support()
}

/// Entries of `table` supported inside `coords`.
pub fn restrict_to_subset(table: &FourierTable, coords: &[usize]) -> FourierTable {
    table.restrict_to_subset(coords)
}
