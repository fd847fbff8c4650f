use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Largest supported matrix dimension (twelve qubits).
pub const MAX_DIM: usize = 1 << 12;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("matrix dimension must be at least 1"));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, cap: MAX_DIM });
    }
    Ok(())
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 8 {
            for r in 0..self.dim {
                let row: Vec<String> = (0..self.dim)
                    .map(|c| {
                        let z = self[(r, c)];
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    })
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = C64::new(v, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |r, c| u[r] * v[c].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_c(&self, k: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: f64, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * k;
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity, `max |A_rc − conj(A_cr)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim;
        (0..n).all(|r| (0..n).all(|c| r == c || self.data[r * n + c] == C64::new(0.0, 0.0)))
    }

    /// ½(A + A†)
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (m, n) = (self.dim, other.dim);
        check_dim(m * n)?;
        let dim = m * n;
        let mut out = Self::zeros(dim);
        for ar in 0..m {
            for ac in 0..m {
                let a = self[(ar, ac)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for br in 0..n {
                    for bc in 0..n {
                        out.data[(ar * n + br) * dim + ac * n + bc] = a * other[(br, bc)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Re tr{self · other} without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        self.trace_product(other).re
    }

    /// tr{self · other} without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * other.data[c * n + r];
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}
