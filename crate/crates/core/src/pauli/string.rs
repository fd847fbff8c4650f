use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::operator::{ComplexMatrix, HermitianOperator};
use crate::{Error, Result};

/// Longest supported Pauli string.
pub const MAX_QUBITS: usize = 32;

/// `i^k`
pub(crate) fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// A tensor product of single-qubit Paulis, `σ^{s_0} ⊗ … ⊗ σ^{s_{d-1}}`.
///
/// Symbols are 0 = I, 1 = X, 2 = Y, 3 = Z. Position 0 is the leftmost
/// tensor factor, which acts on the most significant bit of a basis index.
/// Internally the string is a pair of bit masks in basis-index order:
/// X ↦ (x, ¬z), Y ↦ (x, z), Z ↦ (¬x, z).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    d: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        let d = symbols.len();
        if d == 0 || d > MAX_QUBITS {
            return Err(Error::invalid(format!("Pauli string length {d} outside 1..={MAX_QUBITS}")));
        }
        let mut s = Self { d: d as u8, x: 0, z: 0 };
        for (pos, &sym) in symbols.iter().enumerate() {
            let bit = s.bit(pos);
            match sym {
                0 => {}
                1 => s.x |= bit,
                2 => {
                    s.x |= bit;
                    s.z |= bit;
                }
                3 => s.z |= bit,
                _ => return Err(Error::invalid(format!("Pauli symbol {sym} outside 0..=3"))),
            }
        }
        Ok(s)
    }

    /// The identity string on `d` qubits.
    pub fn identity(d: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&d), "Pauli string length {d} outside 1..={MAX_QUBITS}");
        Self { d: d as u8, x: 0, z: 0 }
    }

    /// Builds a string from basis-order masks.
    pub fn from_masks(d: usize, x: u64, z: u64) -> Result<Self> {
        if d == 0 || d > MAX_QUBITS {
            return Err(Error::invalid(format!("Pauli string length {d} outside 1..={MAX_QUBITS}")));
        }
        let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
        if x & !full != 0 || z & !full != 0 {
            return Err(Error::invalid("mask has bits beyond the string length"));
        }
        Ok(Self { d: d as u8, x, z })
    }

    /// Single-symbol string: `sym` at `pos`, identity elsewhere.
    pub fn single(d: usize, pos: usize, sym: u8) -> Result<Self> {
        let mut symbols = vec![0u8; d];
        *symbols.get_mut(pos).ok_or_else(|| Error::invalid(format!("position {pos} out of range")))? = sym;
        Self::new(&symbols)
    }

    #[inline]
    fn bit(&self, pos: usize) -> u64 {
        1u64 << (self.d as usize - 1 - pos)
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn symbol(&self, pos: usize) -> u8 {
        let b = self.bit(pos);
        match (self.x & b != 0, self.z & b != 0) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        }
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.d()).map(|p| self.symbol(p)).collect()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x | self.z == 0
    }

    /// Positions carrying a non-identity symbol, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.d()).filter(|&p| self.symbol(p) != 0).collect()
    }

    /// True when every non-identity position lies in `coords`.
    pub fn supported_in(&self, coords: &[usize]) -> bool {
        let mask = coords.iter().filter(|&&p| p < self.d()).fold(0u64, |m, &p| m | self.bit(p));
        (self.x | self.z) & !mask == 0
    }

    /// True when every symbol is I or Z.
    pub fn is_classical(&self) -> bool {
        self.x == 0
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        debug_assert_eq!(self.d, other.d);
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Phase `φ(c)` with `σ^s|c⟩ = φ(c)|c ⊕ x⟩`.
    #[inline]
    pub fn phase(&self, c: usize) -> C64 {
        let ny = (self.x & self.z).count_ones();
        let neg = (c as u64 & self.z).count_ones();
        i_pow(ny + 2 * neg)
    }

    /// Lexicographic rank among strings of the same length.
    fn key(&self) -> u64 {
        (0..self.d()).fold(0u64, |k, p| (k << 2) | self.symbol(p) as u64)
    }

    /// Symbols at `coords` (in the given order) as a shorter string.
    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        let symbols: Vec<u8> = coords
            .iter()
            .map(|&p| if p < self.d() { Ok(self.symbol(p)) } else { Err(Error::invalid(format!("coordinate {p} out of range"))) })
            .collect::<Result<_>>()?;
        Self::new(&symbols)
    }

    /// Places the symbols of `self` at `coords` of a `d`-qubit string.
    pub fn lift(&self, d: usize, coords: &[usize]) -> Result<Self> {
        if coords.len() != self.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), got: coords.len() });
        }
        let mut symbols = vec![0u8; d];
        for (i, &p) in coords.iter().enumerate() {
            *symbols.get_mut(p).ok_or_else(|| Error::invalid(format!("coordinate {p} out of range")))? = self.symbol(i);
        }
        Self::new(&symbols)
    }

    /// Dense `2^d × 2^d` matrix of `σ^s`.
    pub fn matrix(&self) -> Result<HermitianOperator> {
        let n = dense_dim(self.d())?;
        let mut m = ComplexMatrix::zeros(n);
        for c in 0..n {
            m[(c ^ self.x as usize, c)] = self.phase(c);
        }
        Ok(HermitianOperator::from_hermitian(m))
    }

    /// `σ^s v` in O(2^d).
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let n = dense_dim(self.d())?;
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (c, &vc) in v.iter().enumerate() {
            out[c ^ self.x as usize] = self.phase(c) * vc;
        }
        Ok(out)
    }

    /// `tr{A σ^s} = Σ_i A[i, i⊕x] φ(i)`, O(2^d).
    pub fn trace_with(&self, a: &ComplexMatrix) -> Result<C64> {
        let n = dense_dim(self.d())?;
        if a.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
        }
        let x = self.x as usize;
        Ok((0..n).map(|i| a[(i, i ^ x)] * self.phase(i)).sum())
    }
}

/// `2^d`, checked against the dense cap.
pub(crate) fn dense_dim(d: usize) -> Result<usize> {
    let cap = crate::operator::MAX_DIM;
    if d >= usize::BITS as usize || (1usize << d) > cap {
        return Err(Error::DimensionTooLarge { dim: 1usize.checked_shl(d as u32).unwrap_or(usize::MAX), cap });
    }
    Ok(1 << d)
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d.cmp(&other.d).then_with(|| self.key().cmp(&other.key()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.d() {
            write!(f, "{}", self.symbol(p))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ[{self}]")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_matches('"');
        let symbols = s
            .chars()
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                _ => Err(Error::parse(format!("invalid Pauli symbol {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(&symbols).map_err(|e| Error::parse(format!("{s:?}: {e}")))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
