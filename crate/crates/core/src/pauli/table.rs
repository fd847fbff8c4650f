use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DegreeSet, PauliString};
use crate::{Error, Result};

/// Real Fourier coefficients indexed by Pauli string, iterated in
/// lexicographic order. Missing strings have coefficient zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    d: usize,
    entries: BTreeMap<PauliString, f64>,
}

impl FourierTable {
    pub fn new(d: usize) -> Self {
        Self { d, entries: BTreeMap::new() }
    }

    pub fn from_entries(d: usize, entries: impl IntoIterator<Item = (PauliString, f64)>) -> Result<Self> {
        let mut t = Self::new(d);
        for (s, v) in entries {
            t.insert(s, v)?;
        }
        Ok(t)
    }

    /// Sets the coefficient of `s`, replacing any previous value.
    pub fn insert(&mut self, s: PauliString, value: f64) -> Result<()> {
        if s.d() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: s.d() });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        self.entries.insert(s, value);
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: &PauliString) -> f64 {
        self.entries.get(s).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, s: &PauliString) -> bool {
        self.entries.contains_key(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> + '_ {
        self.entries.iter().map(|(s, &v)| (s, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &PauliString> + '_ {
        self.entries.keys()
    }

    /// Keeps the entries whose support lies in `coords`.
    pub fn restrict_to_subset(&self, coords: &[usize]) -> Self {
        Self { d: self.d, entries: self.entries.iter().filter(|(s, _)| s.supported_in(coords)).map(|(&s, &v)| (s, v)).collect() }
    }

    /// Keeps the entries whose key is in `set`.
    pub fn restrict_to(&self, set: &DegreeSet) -> Self {
        Self { d: self.d, entries: self.entries.iter().filter(|(s, _)| set.contains(s)).map(|(&s, &v)| (s, v)).collect() }
    }

    /// Drops entries with `|value| ≤ tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self { d: self.d, entries: self.entries.iter().filter(|(_, v)| v.abs() > tol).map(|(&s, &v)| (s, v)).collect() }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { d: self.d, entries: self.entries.iter().map(|(&s, &v)| (s, k * v)).collect() }
    }

    pub fn sum_squares(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum()
    }

    /// `Σ_s (self_s − other_s)²` over the union of keys.
    pub fn squared_distance(&self, other: &Self) -> f64 {
        let mut acc: f64 = self.iter().map(|(s, v)| (v - other.get(s)).powi(2)).sum();
        acc += other.iter().filter(|(s, _)| !self.contains(s)).map(|(_, v)| v * v).sum::<f64>();
        acc
    }

    /// `max_s |self_s − other_s|` over the union of keys.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter().map(|(s, v)| (v - other.get(s)).abs()).chain(other.iter().map(|(s, v)| (v - self.get(s)).abs())).fold(0.0, f64::max)
    }

    /// The `.ftab` text form: a `d=<n>` header, then `"<symbols>" <coefficient>`
    /// per entry with shortest round-trip decimal coefficients.
    pub fn to_ftab(&self) -> String {
        let mut out = format!("d={}\n", self.d);
        for (s, v) in &self.entries {
            let _ = writeln!(out, "\"{s}\" {v:?}");
        }
        out
    }

    pub fn parse_ftab(text: &str) -> Result<Self> {
        let mut table: Option<Self> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::parse(format!("line {}: {msg}", lineno + 1));
            if let Some(v) = line.strip_prefix("d=") {
                if table.is_some() {
                    return Err(at("duplicate d= header".into()));
                }
                let d: usize = v.trim().parse().map_err(|_| at(format!("bad header {line:?}")))?;
                table = Some(Self::new(d));
                continue;
            }
            let t = table.as_mut().ok_or_else(|| at("entry before d= header".into()))?;
            let mut parts = line.split_whitespace();
            let (key, value) = match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(v), None) => (k, v),
                _ => return Err(at(format!("expected '\"<symbols>\" <coefficient>', got {line:?}"))),
            };
            if !(key.starts_with('"') && key.ends_with('"') && key.len() >= 2) {
                return Err(at(format!("symbols must be quoted: {key}")));
            }
            let s: PauliString = key.parse().map_err(|e: Error| at(e.to_string()))?;
            let v: f64 = value.parse().map_err(|_| at(format!("bad coefficient {value:?}")))?;
            if t.contains(&s) {
                return Err(at(format!("duplicate entry {s}")));
            }
            t.insert(s, v).map_err(|e| at(e.to_string()))?;
        }
        table.ok_or_else(|| Error::parse("missing d= header"))
    }

    pub fn read_ftab(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_ftab(&std::fs::read_to_string(path)?)
    }

    pub fn write_ftab(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_ftab())?;
        Ok(())
    }
}
