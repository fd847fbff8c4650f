//! Hermitian eigensolvers.
//!
//! Two deterministic in-house solvers share one contract: eigenvalues in
//! descending order and a unitary matrix whose columns are the matching
//! eigenvectors. Cyclic Jacobi handles small matrices (and serves as a cross
//! check for the other path); Householder tridiagonalization followed by
//! implicit QL handles the rest.

use num_complex::Complex64 as C64;

use super::{ComplexMatrix, HermitianOperator};
use crate::{Error, Result};

/// Matrices up to this dimension go through cyclic Jacobi.
pub const JACOBI_MAX_DIM: usize = 32;

const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITER: usize = 64;

/// Eigendecomposition `H = V · diag(λ) · V†`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V · diag(f(λ)) · V†`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in r..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    if w[k] != 0.0 {
                        acc += v[(r, k)] * v[(c, k)].conj() * w[k];
                    }
                }
                out[(r, c)] = acc;
                out[(c, r)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// ⟨v_i|ρ|v_i⟩ for every eigenvector.
    pub fn expectations(&self, rho: &ComplexMatrix) -> Vec<f64> {
        let n = self.dim();
        let v = &self.eigenvectors;
        (0..n)
            .map(|i| {
                let col: Vec<C64> = (0..n).map(|r| v[(r, i)]).collect();
                let rv = rho.mul_vec(&col);
                col.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
            })
            .collect()
    }
}

/// Eigendecomposition of a Hermitian operator.
pub fn hermitian_eig(h: &HermitianOperator) -> Result<Spectrum> {
    let m = h.matrix();
    if m.is_diagonal() {
        return Ok(diagonal_spectrum(m));
    }
    if m.dim() <= JACOBI_MAX_DIM {
        jacobi_eig(m)
    } else {
        tridiagonal_eig(m)
    }
}

fn diagonal_spectrum(m: &ComplexMatrix) -> Spectrum {
    let n = m.dim();
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut vecs = ComplexMatrix::identity(n);
    sort_descending(vals, &mut vecs)
}

fn sort_descending(vals: Vec<f64>, vecs: &mut ComplexMatrix) -> Spectrum {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep their solver order.
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let eigenvalues = order.iter().map(|&i| vals[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| vecs[(r, order[c])]);
    Spectrum { eigenvalues, eigenvectors }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn frobenius(a: &ComplexMatrix) -> f64 {
    a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Cyclic Jacobi with a fixed row-major sweep order.
pub fn jacobi_eig(input: &ComplexMatrix) -> Result<Spectrum> {
    let n = input.dim();
    let mut a = input.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = frobenius(&a).max(f64::MIN_POSITIVE);
    let target = 1e-15 * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigNoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE || r < 1e-18 * scale {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let pc = phase.conj(); // e^{−iφ}

                // A ← A U on columns p, q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * pc * s;
                    a[(k, q)] = akp * s + akq * pc * c;
                }
                // A ← U† A on rows p, q
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V ← V U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * pc * s;
                    v[(k, q)] = vkp * s + vkq * pc * c;
                }
            }
        }
    }
    let vals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(sort_descending(vals, &mut v))
}

/// Householder reduction to real symmetric tridiagonal form followed by
/// implicit QL with Wilkinson-style shifts.
pub fn tridiagonal_eig(input: &ComplexMatrix) -> Result<Spectrum> {
    let n = input.dim();
    let mut a = input.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    let mut reflectors = Vec::new();

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<C64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if norm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // Trailing block S ← S − 2(v q† + q v†), q = S v − (v† S v) v
        let off = k + 1;
        let p: Vec<C64> = (0..len)
            .map(|i| {
                let row = &a.row(off + i)[off..];
                row.iter().zip(&v).map(|(x, y)| x * y).sum()
            })
            .collect();
        let kk: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk.re).collect();
        for i in 0..len {
            let (vi, wi) = (v[i] * 2.0, w[i] * 2.0);
            let row = &mut a.data_mut()[(off + i) * n + off..(off + i + 1) * n];
            for ((x, vj), wj) in row.iter_mut().zip(&v).zip(&w) {
                *x -= vi * wj.conj() + wi * vj.conj();
            }
        }
        a[(off, k)] = alpha;
        a[(k, off)] = alpha.conj();
        for i in 1..len {
            a[(off + i, k)] = C64::new(0.0, 0.0);
            a[(k, off + i)] = C64::new(0.0, 0.0);
        }
        reflectors.push((off, v));
    }
    // Q = H_0 H_1 ⋯ applied right to left, so each step only touches the trailing block.
    for (off, v) in reflectors.iter().rev() {
        let off = *off;
        let mut dot = vec![C64::new(0.0, 0.0); n - off];
        for (j, vj) in v.iter().enumerate() {
            let row = &q.row(off + j)[off..];
            let vc = vj.conj();
            for (d, x) in dot.iter_mut().zip(row) {
                *d += vc * x;
            }
        }
        for (i, vi) in v.iter().enumerate() {
            let vi = vi * 2.0;
            let row = &mut q.data_mut()[(off + i) * n + off..(off + i + 1) * n];
            for (x, d) in row.iter_mut().zip(&dot) {
                *x -= vi * d;
            }
        }
    }

    // Make the sub-diagonal real with a diagonal unitary, folded into Q.
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = C64::new(1.0, 0.0);
    for i in 1..n {
        let sub = a[(i, i - 1)];
        let r = sub.norm();
        if r > 0.0 {
            phase = phase * sub / r;
        }
        e[i] = r;
        for row in 0..n {
            q[(row, i)] *= phase;
        }
    }

    // Rotations act on columns of Q; work on the transpose so they touch contiguous rows.
    let mut qt = q.adjoint();
    tql2(&mut d, &mut e, &mut qt)?;
    let mut q = qt.adjoint();
    Ok(sort_descending(d, &mut q))
}

/// Implicit QL on a real symmetric tridiagonal matrix (diagonal `d`,
/// sub-diagonal `e[1..]`), accumulating rotations into the rows of `zt`.
/// Rotations are real, so conjugation commutes with them.
fn tql2(d: &mut [f64], e: &mut [f64], zt: &mut ComplexMatrix) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::EigNoConvergence { sweeps: iter, residual: e[l].abs() });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = zt.data_mut()[i * n..(i + 2) * n].split_at_mut(n);
                    for (zk, zk1) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (a, b) = (*zk, *zk1);
                        *zk1 = a * s + b * c;
                        *zk = a * c - b * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let m = ComplexMatrix::from_fn(n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        m.hermitian_part()
    }

    fn check(spec: &Spectrum, h: &ComplexMatrix) {
        let n = h.dim();
        assert!(spec.reconstruct().max_abs_diff(h) <= 1e-8, "reconstruction");
        let v = &spec.eigenvectors;
        let vhv = v.adjoint().matmul(v);
        assert!(vhv.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-8, "unitarity");
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]), "descending");
    }

    #[test]
    fn diagonal_input() {
        let h = HermitianOperator::new(ComplexMatrix::from_diag(&[3.0, -1.0])).unwrap();
        let s = hermitian_eig(&h).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, -1.0]);
        assert_eq!(s.eigenvectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_x_has_plus_minus_one() {
        let x = ComplexMatrix::from_fn(2, |r, c| if r != c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        for spec in [jacobi_eig(&x).unwrap(), tridiagonal_eig(&x).unwrap()] {
            assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
            assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
            check(&spec, &x);
        }
    }

    #[test]
    fn random_hermitian_both_solvers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[2usize, 3, 5, 8, 16, 40, 64] {
            let h = random_hermitian(n, &mut rng);
            let a = jacobi_eig(&h).unwrap();
            let b = tridiagonal_eig(&h).unwrap();
            check(&a, &h);
            check(&b, &h);
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Projector of rank 2 in dim 4 rotated by a non-trivial unitary.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(4, &mut rng);
        let s = jacobi_eig(&h).unwrap();
        let p = s.map(|l| if l > s.eigenvalues[2] { 1.0 } else { 0.0 });
        for spec in [jacobi_eig(&p).unwrap(), tridiagonal_eig(&p).unwrap()] {
            check(&spec, &p);
            let rounded: Vec<f64> = spec.eigenvalues.iter().map(|l| l.round()).collect();
            assert_eq!(rounded, vec![1.0, 1.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(12, &mut rng);
        let a = jacobi_eig(&h).unwrap();
        let b = jacobi_eig(&h).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }
}
