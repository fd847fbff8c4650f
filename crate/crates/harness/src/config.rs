//! Experiment configuration files.
//!
//! ```text
//! name = parity_qld
//! source = parity.src        # source spec file, relative to this file
//! algorithm = qld            # qld | junta
//! k = 2                      # degree bound (qld) or junta size (junta); sweepable
//! classical = true           # qld: only Z/I strings
//! # strings = 30, 03         # qld: explicit degree set instead of k
//! # degree_set = a.deg       # qld: degree set file instead of k
//! n = 10000, 50000           # sweepable
//! delta = 0.05               # sweepable
//! d = 4, 5                   # optional, resizes generated junta sources
//! eta = 0, 0.1               # optional, label noise override
//! epsilon = 0
//! cover = greedy-multi       # greedy-multi | exhaustive
//! seeds = 0..20              # list and half-open ranges
//! n_test = 10000
//! output = out/parity        # relative to this file
//! ```
//!
//! A qld config with none of `k`, `strings`, `degree_set` learns over the
//! full degree set.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qfl_core::compatibility::CoverStrategy;
use qfl_core::learner::{Algorithm, DEFAULT_N_TEST};
use qfl_core::pauli::DegreeSet;
use qfl_core::simulator::{SampleSource, SourceSpec};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub enum DegreeSpec {
    /// Strings of support at most `k` from the sweep.
    Upto {
        classical: bool,
    },
    Full,
    Explicit(DegreeSet),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub path: PathBuf,
    pub source_path: PathBuf,
    pub source: SourceSpec,
    pub algorithm: Algorithm,
    pub degree: DegreeSpec,
    pub k: Vec<usize>,
    pub d: Vec<usize>,
    pub eta: Vec<f64>,
    pub n: Vec<usize>,
    pub delta: Vec<f64>,
    pub epsilon: f64,
    pub cover: CoverStrategy,
    pub seeds: Vec<u64>,
    pub n_test: usize,
    pub output: PathBuf,
}

/// One point of the sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigPoint {
    pub index: usize,
    pub d: Option<usize>,
    pub eta: Option<f64>,
    pub k: Option<usize>,
    pub n: usize,
    pub delta: f64,
}

/// A sweep point with its source and degree set built.
#[derive(Debug)]
pub struct PreparedPoint {
    pub point: ConfigPoint,
    pub source: SampleSource,
    pub set: Option<DegreeSet>,
}

fn err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, HarnessError> {
    let out = v
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| err(format!("{key}: cannot parse {t:?}"))))
        .collect::<Result<Vec<T>, _>>()?;
    if out.is_empty() {
        return Err(err(format!("{key}: empty list")));
    }
    Ok(out)
}

fn one<T: FromStr>(key: &str, v: &str) -> Result<T, HarnessError> {
    v.trim().parse().map_err(|_| err(format!("{key}: cannot parse {v:?}")))
}

fn parse_seeds(v: &str) -> Result<Vec<u64>, HarnessError> {
    let mut seeds = Vec::new();
    for tok in v.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (one("seeds", a)?, one("seeds", b)?);
                if a >= b {
                    return Err(err(format!("seeds: empty range {tok}")));
                }
                seeds.extend(a..b);
            }
            None => seeds.push(one("seeds", tok)?),
        }
    }
    if seeds.is_empty() {
        return Err(err("seeds: empty list"));
    }
    let mut sorted = seeds.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(err(format!("seeds: {} appears twice", w[0])));
    }
    Ok(seeds)
}

/// Comma-separated seeds and half-open ranges, as in the `seeds` key.
pub fn parse_seed_list(v: &str) -> Result<Vec<u64>, HarnessError> {
    parse_seeds(v)
}

impl ExperimentConfig {
    pub fn read(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    /// Parses config text; `path` locates referenced files.
    pub fn parse(text: &str, path: &Path) -> Result<Self, HarnessError> {
        let base = path.parent().unwrap_or(Path::new("."));
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("line {}: expected key = value", lineno + 1)))?;
            let k = k.trim().to_string();
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(err(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
        }
        let mut take = |k: &str| kv.remove(k);

        let source_rel = take("source").ok_or_else(|| err("missing `source`"))?;
        let source_path = base.join(&source_rel);
        let source = SourceSpec::read(&source_path).map_err(|e| err(format!("source {source_rel}: {e}")))?;
        let algorithm = match take("algorithm").as_deref().map(str::trim) {
            Some("qld") => Algorithm::Qld,
            Some("junta") => Algorithm::Junta,
            Some(other) => return Err(err(format!("algorithm: expected qld or junta, got {other:?}"))),
            None => return Err(err("missing `algorithm`")),
        };
        let k: Vec<usize> = take("k").map(|v| list("k", &v)).transpose()?.unwrap_or_default();
        let classical: bool = take("classical").map(|v| one("classical", &v)).transpose()?.unwrap_or(false);
        let explicit = match (take("strings"), take("degree_set")) {
            (Some(_), Some(_)) => return Err(err("give at most one of `strings`, `degree_set`")),
            (Some(s), None) => Some(DegreeSet::parse(&s.replace(',', " ")).map_err(|e| err(format!("strings: {e}")))?),
            (None, Some(f)) => {
                let p = base.join(&f);
                let text = std::fs::read_to_string(&p).map_err(|e| err(format!("cannot read {}: {e}", p.display())))?;
                Some(DegreeSet::parse(&text).map_err(|e| err(format!("degree_set {f}: {e}")))?)
            }
            (None, None) => None,
        };
        let degree = match (algorithm, explicit) {
            (Algorithm::Junta, Some(_)) => return Err(err("junta runs take `k`, not an explicit degree set")),
            (Algorithm::Junta, None) if k.is_empty() => return Err(err("junta runs need `k`")),
            (Algorithm::Junta, None) if classical => return Err(err("`classical` applies to qld runs only")),
            (Algorithm::Junta, None) => DegreeSpec::Upto { classical: false },
            (Algorithm::Qld, Some(_)) if !k.is_empty() => return Err(err("give either `k` or an explicit degree set")),
            (Algorithm::Qld, Some(set)) => DegreeSpec::Explicit(set),
            (Algorithm::Qld, None) if k.is_empty() && classical => return Err(err("`classical` needs `k`")),
            (Algorithm::Qld, None) if k.is_empty() => DegreeSpec::Full,
            (Algorithm::Qld, None) => DegreeSpec::Upto { classical },
        };
        let d: Vec<usize> = take("d").map(|v| list("d", &v)).transpose()?.unwrap_or_default();
        let eta: Vec<f64> = take("eta").map(|v| list("eta", &v)).transpose()?.unwrap_or_default();
        let n: Vec<usize> = list("n", &take("n").ok_or_else(|| err("missing `n`"))?)?;
        let delta: Vec<f64> = take("delta").map(|v| list("delta", &v)).transpose()?.unwrap_or_else(|| vec![0.05]);
        let epsilon: f64 = take("epsilon").map(|v| one("epsilon", &v)).transpose()?.unwrap_or(0.0);
        let cover: CoverStrategy =
            take("cover").map(|v| v.parse().map_err(|e| err(format!("cover: {e}")))).transpose()?.unwrap_or_default();
        let seeds = parse_seeds(&take("seeds").ok_or_else(|| err("missing `seeds`"))?)?;
        let n_test: usize = take("n_test").map(|v| one("n_test", &v)).transpose()?.unwrap_or(DEFAULT_N_TEST);
        let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "experiment".into());
        let name = take("name").unwrap_or(default_name);
        let output = base.join(take("output").unwrap_or_else(|| format!("{name}-out")));
        if let Some(k) = kv.keys().next() {
            return Err(err(format!("unknown key {k:?}")));
        }
        let cfg = Self {
            name,
            path: path.to_path_buf(),
            source_path,
            source,
            algorithm,
            degree,
            k,
            d,
            eta,
            n,
            delta,
            epsilon,
            cover,
            seeds,
            n_test,
            output,
        };
        cfg.check_ranges()?;
        Ok(cfg)
    }

    fn check_ranges(&self) -> Result<(), HarnessError> {
        if let Some(d) = self.delta.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
            return Err(err(format!("delta must lie in (0, 1), got {d}")));
        }
        if self.n.contains(&0) {
            return Err(err("n must be positive"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(err(format!("epsilon must be finite and nonnegative, got {}", self.epsilon)));
        }
        if let Some(e) = self.eta.iter().find(|e| !(0.0..0.5).contains(*e)) {
            return Err(err(format!("eta must lie in [0, 0.5), got {e}")));
        }
        if self.d.contains(&0) {
            return Err(err("d must be positive"));
        }
        Ok(())
    }

    /// The sweep grid in output order: `d`, `eta`, `k`, `n`, `delta`, the
    /// last varying fastest.
    pub fn points(&self) -> Vec<ConfigPoint> {
        fn axis<T: Copy>(v: &[T]) -> Vec<Option<T>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().map(|&x| Some(x)).collect()
            }
        }
        let mut out = Vec::new();
        for d in axis(&self.d) {
            for eta in axis(&self.eta) {
                for k in axis(&self.k) {
                    for &n in &self.n {
                        for &delta in &self.delta {
                            out.push(ConfigPoint { index: out.len(), d, eta, k, n, delta });
                        }
                    }
                }
            }
        }
        out
    }

    /// Builds every point's source and degree set; any failure is a config
    /// error, so nothing runs unless the whole grid is valid.
    pub fn prepare(&self) -> Result<Vec<PreparedPoint>, HarnessError> {
        self.points()
            .into_iter()
            .map(|point| {
                let source = self.source.build(point.d, point.eta).map_err(|e| err(format!("point {}: {e}", point.index)))?;
                let d = source.d();
                let set = match (&self.degree, self.algorithm) {
                    (_, Algorithm::Junta) => {
                        let k = point.k.unwrap_or(0);
                        if k == 0 || k > d {
                            return Err(err(format!("point {}: junta size k = {k} must lie in 1..={d}", point.index)));
                        }
                        None
                    }
                    (DegreeSpec::Full, _) => Some(DegreeSet::full(d)),
                    (DegreeSpec::Upto { classical: true }, _) => Some(DegreeSet::classical_upto(d, point.k.unwrap_or(0))),
                    (DegreeSpec::Upto { classical: false }, _) => Some(DegreeSet::upto(d, point.k.unwrap_or(0))),
                    (DegreeSpec::Explicit(set), _) => {
                        if set.d() != d {
                            return Err(err(format!("point {}: degree set has d = {}, source has d = {d}", point.index, set.d())));
                        }
                        Some(Ok(set.clone()))
                    }
                };
                let set = set.transpose().map_err(|e| err(format!("point {}: {e}", point.index)))?;
                Ok(PreparedPoint { point, source, set })
            })
            .collect()
    }
}
