//! Source specification files.
//!
//! A source file is a list of `key = value` lines (`#` starts a comment):
//!
//! ```text
//! kind = noisy          # realizable | noisy | classical | custom
//! d = 3                 # optional when implied by the payload
//! table = sign.ftab     # realizable, noisy: Fourier table of the sign operator
//! eta = 0.1             # noisy: label flip probability
//! truth_table = 0110    # classical: f(x) for x = 0 .. 2^d − 1
//! junta = parity        # classical, instead of truth_table: parity | and | or | majority
//! coords = 0, 2         # classical junta coordinates (0-based)
//! p0 = 0.5              # custom: prior of label 0
//! rho0 = rho0.mat       # custom: matrix files
//! rho1 = rho1.mat
//! ```
//!
//! Paths are relative to the source file. Matrix files hold one row per
//! line, entries separated by whitespace, each entry `re` or `re,im`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::SampleSource;
use crate::operator::ComplexMatrix;
use crate::pauli::FourierTable;
use crate::{Error, Result};

/// Boolean functions of a coordinate subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BooleanJunta {
    Parity,
    And,
    Or,
    Majority,
}

impl FromStr for BooleanJunta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "parity" => Ok(Self::Parity),
            "and" => Ok(Self::And),
            "or" => Ok(Self::Or),
            "majority" => Ok(Self::Majority),
            other => Err(Error::parse(format!("unknown junta function {other:?}"))),
        }
    }
}

impl BooleanJunta {
    pub fn eval(self, bits: &[u8]) -> u8 {
        let ones = bits.iter().filter(|&&b| b == 1).count();
        match self {
            Self::Parity => (ones % 2) as u8,
            Self::And => (ones == bits.len()) as u8,
            Self::Or => (ones > 0) as u8,
            Self::Majority => (2 * ones > bits.len()) as u8,
        }
    }
}

/// Truth table of `func` applied to the bits of `x` at `coords`; coordinate
/// 0 is the most significant bit of `x`.
pub fn junta_truth_table(d: usize, coords: &[usize], func: BooleanJunta) -> Result<Vec<u8>> {
    if let Some(&c) = coords.iter().find(|&&c| c >= d) {
        return Err(Error::invalid(format!("junta coordinate {c} out of range for d = {d}")));
    }
    let n = crate::pauli::dense_dim(d)?;
    Ok((0..n)
        .map(|x| {
            let bits: Vec<u8> = coords.iter().map(|&c| (x >> (d - 1 - c) & 1) as u8).collect();
            func.eval(&bits)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum TruthSpec {
    Table(Vec<u8>),
    Junta { func: BooleanJunta, coords: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpecKind {
    Realizable { table: FourierTable },
    Noisy { table: FourierTable, eta: f64 },
    Classical { truth: TruthSpec },
    Custom { p0: f64, rho0: ComplexMatrix, rho1: ComplexMatrix },
}

/// A parsed source file; [`SourceSpec::build`] turns it into a source.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceSpecKind,
    pub d: Option<usize>,
}

/// Parses a matrix file.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                let bad = || Error::parse(format!("line {}: bad matrix entry {tok:?}", lineno + 1));
                let (re, im) = match tok.split_once(',') {
                    Some((a, b)) => (a.parse::<f64>().map_err(|_| bad())?, b.parse::<f64>().map_err(|_| bad())?),
                    None => (tok.parse::<f64>().map_err(|_| bad())?, 0.0),
                };
                Ok(C64::new(re, im))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::parse("empty matrix file"));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::parse(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
    }
    ComplexMatrix::from_vec(n, rows.into_iter().flatten().collect())
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::parse(format!("truth table entry {c:?} is not 0 or 1"))),
        })
        .collect()
}

fn parse_coords(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::parse(format!("bad coordinate {t:?}"))))
        .collect()
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::parse(format!("{key}: expected a number, got {v:?}")))
}

impl SourceSpec {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::parse(format!("cannot read source file {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses source text, resolving referenced files against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::parse(format!("line {}: expected key = value, got {line:?}", lineno + 1)))?;
            let k = k.trim().to_string();
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::parse(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
        }
        let take = |kv: &mut BTreeMap<String, String>, k: &str| kv.remove(k);
        let need = |kv: &mut BTreeMap<String, String>, k: &str, kind: &str| {
            kv.remove(k).ok_or_else(|| Error::parse(format!("{kind} source needs `{k}`")))
        };
        let resolve = |v: &str| -> PathBuf { base.join(v) };
        let read_file = |v: &str| -> Result<String> {
            let p = resolve(v);
            std::fs::read_to_string(&p).map_err(|e| Error::parse(format!("cannot read {}: {e}", p.display())))
        };

        let kind = need(&mut kv, "kind", "every")?;
        let d = take(&mut kv, "d").map(|v| v.parse::<usize>().map_err(|_| Error::parse(format!("d: bad value {v:?}")))).transpose()?;
        let kind = match kind.as_str() {
            "realizable" | "noisy" => {
                let table = FourierTable::parse_ftab(&read_file(&need(&mut kv, "table", &kind)?)?)?;
                if kind == "noisy" {
                    let eta = parse_f64("eta", &need(&mut kv, "eta", &kind)?)?;
                    SourceSpecKind::Noisy { table, eta }
                } else {
                    SourceSpecKind::Realizable { table }
                }
            }
            "classical" => {
                let truth = match (take(&mut kv, "truth_table"), take(&mut kv, "junta")) {
                    (Some(t), None) => TruthSpec::Table(parse_bits(&t)?),
                    (None, Some(j)) => TruthSpec::Junta { func: j.parse()?, coords: parse_coords(&need(&mut kv, "coords", "junta")?)? },
                    _ => return Err(Error::parse("classical source needs exactly one of `truth_table`, `junta`")),
                };
                SourceSpecKind::Classical { truth }
            }
            "custom" => {
                let p0 = parse_f64("p0", &need(&mut kv, "p0", &kind)?)?;
                let rho0 = parse_matrix(&read_file(&need(&mut kv, "rho0", &kind)?)?)?;
                let rho1 = parse_matrix(&read_file(&need(&mut kv, "rho1", &kind)?)?)?;
                SourceSpecKind::Custom { p0, rho0, rho1 }
            }
            other => return Err(Error::parse(format!("unknown source kind {other:?}"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::parse(format!("unknown or unused source key {k:?}")));
        }
        let spec = Self { kind, d };
        spec.check()?;
        Ok(spec)
    }

    /// Checks everything that can be checked without building matrices.
    pub fn check(&self) -> Result<()> {
        let implied = match &self.kind {
            SourceSpecKind::Realizable { table } | SourceSpecKind::Noisy { table, .. } => Some(table.d()),
            SourceSpecKind::Classical { truth: TruthSpec::Table(t) } => {
                if t.len() < 2 || !t.len().is_power_of_two() {
                    return Err(Error::invalid(format!("truth table length {} is not a power of two ≥ 2", t.len())));
                }
                Some(t.len().trailing_zeros() as usize)
            }
            SourceSpecKind::Classical { truth: TruthSpec::Junta { .. } } => None,
            SourceSpecKind::Custom { rho0, .. } => Some(rho0.dim().trailing_zeros() as usize),
        };
        if let (Some(a), Some(b)) = (self.d, implied) {
            if a != b {
                return Err(Error::invalid(format!("d = {a} disagrees with the payload (d = {b})")));
            }
        }
        if self.d.or(implied).is_none() {
            return Err(Error::invalid("junta source needs `d`"));
        }
        if let SourceSpecKind::Noisy { eta, .. } = self.kind {
            if !(0.0..0.5).contains(&eta) {
                return Err(Error::invalid(format!("eta must lie in [0, 0.5), got {eta}")));
            }
        }
        if let SourceSpecKind::Custom { p0, .. } = self.kind {
            if !(0.0..=1.0).contains(&p0) {
                return Err(Error::invalid(format!("p0 must lie in [0, 1], got {p0}")));
            }
        }
        Ok(())
    }

    /// Qubit count the spec builds with no override.
    pub fn qubits(&self) -> usize {
        self.d.unwrap_or_else(|| match &self.kind {
            SourceSpecKind::Realizable { table } | SourceSpecKind::Noisy { table, .. } => table.d(),
            SourceSpecKind::Classical { truth: TruthSpec::Table(t) } => t.len().trailing_zeros() as usize,
            SourceSpecKind::Classical { truth: TruthSpec::Junta { .. } } => 0,
            SourceSpecKind::Custom { rho0, .. } => rho0.dim().trailing_zeros() as usize,
        })
    }

    /// Which overrides the spec accepts: `(d, eta)`.
    pub fn accepts_overrides(&self) -> (bool, bool) {
        match &self.kind {
            SourceSpecKind::Classical { truth: TruthSpec::Junta { .. } } => (true, true),
            SourceSpecKind::Classical { .. } | SourceSpecKind::Realizable { .. } | SourceSpecKind::Noisy { .. } => (false, true),
            SourceSpecKind::Custom { .. } => (false, false),
        }
    }

    /// Builds the source. `d` resizes generated junta sources; `eta` adds
    /// (or replaces) label noise on sign-operator sources.
    pub fn build(&self, d: Option<usize>, eta: Option<f64>) -> Result<SampleSource> {
        let (accepts_d, accepts_eta) = self.accepts_overrides();
        if d.is_some_and(|v| v != self.qubits()) && !accepts_d {
            return Err(Error::invalid("this source kind has a fixed qubit count"));
        }
        if eta.is_some() && !accepts_eta {
            return Err(Error::invalid("custom sources do not take label noise"));
        }
        match &self.kind {
            SourceSpecKind::Realizable { table } => SampleSource::from_table(table, eta.unwrap_or(0.0)),
            SourceSpecKind::Noisy { table, eta: base } => SampleSource::from_table(table, eta.unwrap_or(*base)),
            SourceSpecKind::Classical { truth } => {
                let bits = match truth {
                    TruthSpec::Table(t) => t.clone(),
                    TruthSpec::Junta { func, coords } => junta_truth_table(d.unwrap_or(self.qubits()), coords, *func)?,
                };
                match eta {
                    Some(e) if e > 0.0 => SampleSource::noisy(&crate::pauli::classical_embedding(&bits)?, e),
                    _ => SampleSource::classical(&bits),
                }
            }
            SourceSpecKind::Custom { p0, rho0, rho1 } => SampleSource::from_matrices(*p0, rho0.clone(), rho1.clone()),
        }
    }
}
