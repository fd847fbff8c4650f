use num_complex::Complex64 as C64;

use super::string::dense_dim;
use super::{DegreeSet, FourierTable, PauliString};
use crate::exec::Exec;
use crate::operator::{ComplexMatrix, HermitianOperator};
use crate::{Error, Result};

/// Imaginary parts of `tr{A σ^s}` above this are reported as errors.
pub const IMAG_TOL: f64 = 1e-8;

fn qubits_of(a: &ComplexMatrix) -> Result<usize> {
    let n = a.dim();
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::invalid(format!("dimension {n} is not a power of two ≥ 2")));
    }
    Ok(n.trailing_zeros() as usize)
}

fn real_coefficient(s: &PauliString, tr: C64, n: usize) -> Result<f64> {
    if tr.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue { string: s.to_string(), residue: tr.im });
    }
    Ok(tr.re / n as f64)
}

/// `a_s = 2^{-d} Re tr{A σ^s}`, in O(2^d).
pub fn fourier_coefficient(a: &ComplexMatrix, s: &PauliString) -> Result<f64> {
    real_coefficient(s, s.trace_with(a)?, a.dim())
}

/// Coefficients of `a` on every string of `set`.
pub fn fourier_transform(a: &ComplexMatrix, set: &DegreeSet, exec: Exec) -> Result<FourierTable> {
    let d = qubits_of(a)?;
    if set.d() != d {
        return Err(Error::DimensionMismatch { expected: d, got: set.d() });
    }
    let strings = set.strings();
    let values = exec.try_map(strings.len(), |i| fourier_coefficient(a, &strings[i]))?;
    FourierTable::from_entries(d, strings.iter().copied().zip(values))
}

/// All `4^d` traces `tr{A σ^s}` in O(d 4^d) by a per-qubit butterfly.
///
/// Entry `(r, c)` of the result holds the trace for the string with
/// z-mask `r` and x-mask `r ⊕ c`.
pub fn pauli_traces(a: &ComplexMatrix, exec: Exec) -> Result<ComplexMatrix> {
    let d = qubits_of(a)?;
    let n = a.dim();
    let mut m = a.clone();
    let data = m.data_mut();
    let i = C64::new(0.0, 1.0);
    for q in 0..d {
        let b = 1usize << q;
        for block in data.chunks_mut(2 * b * n) {
            let (lo, hi) = block.split_at_mut(b * n);
            exec.zip_chunks_mut(lo, hi, n, |lo, hi| {
                for c in (0..n).filter(|c| c & b == 0) {
                    let (a00, a01, a10, a11) = (lo[c], lo[c | b], hi[c], hi[c | b]);
                    lo[c] = a00 + a11;
                    lo[c | b] = a01 + a10;
                    hi[c] = i * (a01 - a10);
                    hi[c | b] = a00 - a11;
                }
            });
        }
    }
    Ok(m)
}

/// Coefficients of `a` on all `4^d` strings (zeros included).
pub fn fourier_transform_full(a: &ComplexMatrix, exec: Exec) -> Result<FourierTable> {
    let d = qubits_of(a)?;
    let n = a.dim();
    let traces = pauli_traces(a, exec)?;
    let mut table = FourierTable::new(d);
    for r in 0..n {
        for c in 0..n {
            let s = PauliString::from_masks(d, (r ^ c) as u64, r as u64)?;
            table.insert(s, real_coefficient(&s, traces[(r, c)], n)?)?;
        }
    }
    Ok(table)
}

/// `Σ_s T_s σ^s` as a dense operator.
pub fn synthesize(table: &FourierTable) -> Result<HermitianOperator> {
    let n = dense_dim(table.d())?;
    let mut m = ComplexMatrix::zeros(n);
    for (s, v) in table.iter() {
        if v == 0.0 {
            continue;
        }
        let x = s.x_mask() as usize;
        for c in 0..n {
            m[(c ^ x, c)] += s.phase(c) * v;
        }
    }
    Ok(HermitianOperator::from_hermitian(m))
}

/// The diagonal operator `U_f|x⟩ = −(−1)^{f(x)}|x⟩` of a Boolean function
/// given by its truth table (index `x` in basis order, the first coordinate
/// being the most significant bit).
pub fn classical_embedding(truth_table: &[u8]) -> Result<HermitianOperator> {
    let n = truth_table.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::invalid(format!("truth table length {n} is not a power of two ≥ 2")));
    }
    dense_dim(n.trailing_zeros() as usize)?;
    let diag = truth_table
        .iter()
        .map(|&v| match v {
            0 => Ok(-1.0),
            1 => Ok(1.0),
            _ => Err(Error::invalid(format!("truth table value {v} is not 0 or 1"))),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(HermitianOperator::from_diag(&diag))
}
