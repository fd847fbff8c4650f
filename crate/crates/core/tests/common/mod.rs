#![allow(dead_code)]

use qfl_core::operator::{ComplexMatrix, DensityOperator, HermitianOperator};
use qfl_core::pauli::PauliString;
use qfl_core::simulator::SampleSource;
use qfl_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> HermitianOperator {
    let m = random_matrix(rng, dim);
    HermitianOperator::new(m.add(&m.adjoint()).scale(0.5)).unwrap()
}

/// `B B† / tr{B B†}` for a random complex `B`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let b = random_matrix(rng, dim);
    let m = b.matmul(&b.adjoint());
    let t = m.trace().re;
    DensityOperator::new(m.hermitian_part().scale(1.0 / t)).unwrap()
}

pub fn random_string(rng: &mut impl Rng, d: usize) -> PauliString {
    let symbols: Vec<u8> = (0..d).map(|_| rng.random_range(0..4)).collect();
    PauliString::new(&symbols).unwrap()
}

pub fn ket(bits: &[(usize, C64)], dim: usize) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); dim];
    for &(i, a) in bits {
        v[i] = a;
    }
    v
}

/// The two-qubit example: `ρ_0 = ½|φ+⟩⟨φ+| + ¼|01⟩⟨01| + ¼|10⟩⟨10|`,
/// `ρ_1` the same with `φ−`, `|φ±⟩ = (|11⟩ ± |00⟩)/√2`, equal priors.
pub fn bell_states() -> (ComplexMatrix, ComplexMatrix) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi_plus = ket(&[(3, c(h, 0.0)), (0, c(h, 0.0))], 4);
    let phi_minus = ket(&[(3, c(h, 0.0)), (0, c(-h, 0.0))], 4);
    let side = ComplexMatrix::from_diag(&[0.0, 0.25, 0.25, 0.0]);
    let rho0 = ComplexMatrix::outer(&phi_plus, &phi_plus).scale(0.5).add(&side);
    let rho1 = ComplexMatrix::outer(&phi_minus, &phi_minus).scale(0.5).add(&side);
    (rho0, rho1)
}

pub fn bell_source() -> SampleSource {
    let (rho0, rho1) = bell_states();
    SampleSource::from_matrices(0.5, rho0, rho1).unwrap()
}

/// `−|11⟩⟨00| − |00⟩⟨11|`
pub fn bell_operator() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(3, 0)] = c(-1.0, 0.0);
    m[(0, 3)] = c(-1.0, 0.0);
    m
}

/// Dense Kronecker product written out index by index.
pub fn kron_naive(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(n * m, |r, col| a[(r / m, col / m)] * b[(r % m, col % m)])
}

/// Binomial count lies within `z` standard deviations of `n p`.
pub fn within_sigma(count: usize, n: usize, p: f64, z: f64) -> bool {
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - n as f64 * p).abs() <= z * sd.max(1e-12)
}
