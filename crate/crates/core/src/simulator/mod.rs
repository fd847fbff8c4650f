//! Ground-truth world: sample sources, the labeling operator and a seeded
//! measurement engine.

mod measure;
mod source;
mod spec;

use std::sync::Arc;

pub use measure::{estimation_observable, measure, measure_batch, BinaryPovm, CompatibleBatch, Measurement, CLAMP_TOL};
pub use source::{draw_sample, draw_samples, SampleSource, SourceComponent, SourceKind, MARGINAL_TOL, SIGN_TOL};
pub use spec::{junta_truth_table, parse_matrix, BooleanJunta, SourceSpec, SourceSpecKind, TruthSpec};

use crate::operator::{ComplexMatrix, DensityOperator, HermitianOperator};
use crate::Result;

/// A training or test example `(ρ_y, y)`. The label qubit is implicit.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub label: u8,
    pub state: Arc<DensityOperator>,
}

/// `c_y = −(−1)^y`: the eigenvalue of `F_Y` on label `y`.
#[inline]
pub fn label_sign(label: u8) -> f64 {
    if label == 0 {
        -1.0
    } else {
        1.0
    }
}

/// `F_Y = I ⊗ diag(−1, +1)` on `d` data qubits plus the label qubit.
pub fn labeling_operator(d: usize) -> Result<HermitianOperator> {
    let n = crate::pauli::dense_dim(d + 1)? / 2;
    let diag: Vec<f64> = (0..2 * n).map(|i| label_sign((i & 1) as u8)).collect();
    Ok(HermitianOperator::from_diag(&diag))
}

/// `ρ_y ⊗ |y⟩⟨y|`
pub fn joint_sample_state(sample: &LabeledSample) -> Result<DensityOperator> {
    let ket = ComplexMatrix::from_diag(if sample.label == 0 { &[1.0, 0.0] } else { &[0.0, 1.0] });
    DensityOperator::new(sample.state.matrix().kron(&ket)?)
}
