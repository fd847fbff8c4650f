use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::PauliString;
use crate::{Error, Result};

/// Largest degree set enumerated by the constructors.
pub const MAX_DEGREE_SET: usize = 1 << 22;

/// A set of Pauli strings of common length, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DegreeSetRepr", into = "DegreeSetRepr")]
pub struct DegreeSet {
    d: usize,
    members: Vec<PauliString>,
}

#[derive(Serialize, Deserialize)]
struct DegreeSetRepr {
    d: usize,
    members: Vec<PauliString>,
}

impl TryFrom<DegreeSetRepr> for DegreeSet {
    type Error = Error;

    fn try_from(r: DegreeSetRepr) -> Result<Self> {
        DegreeSet::new(r.d, r.members)
    }
}

impl From<DegreeSet> for DegreeSetRepr {
    fn from(s: DegreeSet) -> Self {
        DegreeSetRepr { d: s.d, members: s.members }
    }
}

impl DegreeSet {
    /// Rejects duplicates and strings of the wrong length.
    pub fn new(d: usize, members: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut members: Vec<PauliString> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| s.d() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: bad.d() });
        }
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate string {} in degree set", w[0])));
        }
        Ok(Self { d, members })
    }

    /// Like [`DegreeSet::new`] but silently merges duplicates.
    pub fn from_iter_dedup(d: usize, members: impl IntoIterator<Item = PauliString>) -> Result<Self> {
        let mut members: Vec<PauliString> = members.into_iter().collect();
        members.sort();
        members.dedup();
        Self::new(d, members)
    }

    /// All strings with at most `k` non-identity positions.
    pub fn upto(d: usize, k: usize) -> Result<Self> {
        Self::enumerate(d, k, &[1, 2, 3])
    }

    /// All strings over {I, Z} with at most `k` Z positions.
    pub fn classical_upto(d: usize, k: usize) -> Result<Self> {
        Self::enumerate(d, k, &[3])
    }

    /// Every string on `d` qubits.
    pub fn full(d: usize) -> Result<Self> {
        Self::upto(d, d)
    }

    fn enumerate(d: usize, k: usize, alphabet: &[u8]) -> Result<Self> {
        if k > d {
            return Err(Error::invalid(format!("degree {k} exceeds qubit count {d}")));
        }
        if d == 0 || d > super::MAX_QUBITS {
            return Err(Error::invalid(format!("qubit count {d} outside 1..={}", super::MAX_QUBITS)));
        }
        let count = upto_count(d, k, alphabet.len() as u128);
        if count > MAX_DEGREE_SET as u128 {
            return Err(Error::invalid(format!("degree set of size {count} exceeds the cap {MAX_DEGREE_SET}")));
        }
        let mut members = Vec::with_capacity(count as usize);
        let mut symbols = vec![0u8; d];
        fn rec(pos: usize, left: usize, alphabet: &[u8], symbols: &mut Vec<u8>, out: &mut Vec<PauliString>) {
            if pos == symbols.len() {
                out.push(PauliString::new(symbols).expect("valid symbols"));
                return;
            }
            symbols[pos] = 0;
            rec(pos + 1, left, alphabet, symbols, out);
            if left > 0 {
                for &a in alphabet {
                    symbols[pos] = a;
                    rec(pos + 1, left - 1, alphabet, symbols, out);
                }
                symbols[pos] = 0;
            }
        }
        rec(0, k, alphabet, &mut symbols, &mut members);
        Ok(Self { d, members })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &PauliString> + '_ {
        self.members.iter()
    }

    pub fn contains(&self, s: &PauliString) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn index_of(&self, s: &PauliString) -> Option<usize> {
        self.members.binary_search(s).ok()
    }

    /// Members whose support lies in `coords`.
    pub fn restrict_to_subset(&self, coords: &[usize]) -> Self {
        Self { d: self.d, members: self.members.iter().copied().filter(|s| s.supported_in(coords)).collect() }
    }

    /// One string per line; `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut out = format!("d={}\n", self.d);
        for s in &self.members {
            let _ = writeln!(out, "{s}");
        }
        out
    }

    /// Parses [`DegreeSet::to_text`] output. The `d=` header is optional
    /// when at least one string is present.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = None;
        let mut members = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(v) = line.strip_prefix("d=") {
                let v: usize = v.trim().parse().map_err(|_| Error::parse(format!("line {}: bad header {line:?}", lineno + 1)))?;
                d = Some(v);
                continue;
            }
            for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let s: PauliString = tok.parse().map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1)))?;
                members.push(s);
            }
        }
        let d = d.or_else(|| members.first().map(|s| s.d())).ok_or_else(|| Error::parse("empty degree set without d= header"))?;
        Self::new(d, members)
    }
}

impl<'a> IntoIterator for &'a DegreeSet {
    type Item = &'a PauliString;
    type IntoIter = std::slice::Iter<'a, PauliString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_{j≤k} C(d, j) a^j`
pub fn upto_count(d: usize, k: usize, alphabet: u128) -> u128 {
    (0..=k.min(d)).map(|j| binomial(d as u128, j as u128) * alphabet.pow(j as u32)).sum()
}
