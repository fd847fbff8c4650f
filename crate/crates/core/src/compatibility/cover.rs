use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::graph::{Bits, CommutationGraph};
use crate::exec::Exec;
use crate::pauli::{DegreeSet, PauliString};
use crate::rng::{Domain, RngStreams};
use crate::{Error, Result};

/// Largest degree set accepted by [`CoverStrategy::Exhaustive`].
pub const EXHAUSTIVE_MAX: usize = 12;

/// Default number of random orderings tried by greedy-multi.
pub const DEFAULT_RESTARTS: usize = 32;

/// A partition of a degree set into mutually commuting subsets.
///
/// Stored canonically: each subset sorted, subsets ordered by their first
/// element. Comparison is lexicographic on that form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cover {
    d: usize,
    subsets: Vec<Vec<PauliString>>,
}

impl Cover {
    /// Canonicalizes `subsets`; rejects empty subsets, mixed lengths and
    /// strings appearing twice.
    pub fn new(d: usize, subsets: Vec<Vec<PauliString>>) -> Result<Self> {
        let mut subsets = subsets;
        let mut all = Vec::new();
        for b in &mut subsets {
            if b.is_empty() {
                return Err(Error::invalid("cover contains an empty subset"));
            }
            if let Some(s) = b.iter().find(|s| s.d() != d) {
                return Err(Error::DimensionMismatch { expected: d, got: s.d() });
            }
            b.sort();
            all.extend(b.iter().copied());
        }
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("string {} appears in more than one subset", w[0])));
        }
        subsets.sort();
        Ok(Self { d, subsets })
    }

    /// One singleton per string.
    pub fn singletons(set: &DegreeSet) -> Self {
        Self { d: set.d(), subsets: set.iter().map(|&s| vec![s]).collect() }
    }

    fn from_indices(set: &DegreeSet, blocks: Vec<Vec<usize>>) -> Self {
        let strings = set.strings();
        let subsets = blocks.into_iter().map(|b| b.into_iter().map(|i| strings[i]).collect()).collect();
        Self::new(set.d(), subsets).expect("blocks partition the set")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of subsets `m`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<PauliString>] {
        &self.subsets
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subsets.iter().map(Vec::len).collect()
    }

    /// Total number of strings covered.
    pub fn covered(&self) -> usize {
        self.subsets.iter().map(Vec::len).sum()
    }

    /// Checks that the cover partitions `set` into commuting subsets.
    pub fn validate(&self, set: &DegreeSet) -> Result<()> {
        if set.d() != self.d {
            return Err(Error::DimensionMismatch { expected: set.d(), got: self.d });
        }
        for b in &self.subsets {
            for (i, s) in b.iter().enumerate() {
                if !set.contains(s) {
                    return Err(Error::invalid(format!("cover string {s} is not in the degree set")));
                }
                if let Some(t) = b[i + 1..].iter().find(|t| !s.commutes_with(t)) {
                    return Err(Error::NonCommuting { a: s.to_string(), b: t.to_string() });
                }
            }
        }
        if self.covered() != set.len() {
            return Err(Error::invalid(format!("cover has {} strings, degree set has {}", self.covered(), set.len())));
        }
        Ok(())
    }

    /// `(Σ_j √(|B_j|/n · ln(2|B_j|/δ)))²`
    pub fn score(&self, n: usize, delta: f64) -> Result<f64> {
        cover_score(&self.sizes(), n, delta)
    }

    /// One line per subset, comma-separated digit strings.
    pub fn to_text(&self) -> String {
        self.subsets.iter().map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",") + "\n").collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut subsets = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let b = line
                .split(',')
                .map(|t| t.parse::<PauliString>().map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1))))
                .collect::<Result<Vec<_>>>()?;
            subsets.push(b);
        }
        let d = subsets.first().and_then(|b| b.first()).map(|s| s.d()).ok_or_else(|| Error::parse("empty cover"))?;
        Self::new(d, subsets)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

fn term(size: usize, delta: f64) -> f64 {
    let b = size as f64;
    (b * (2.0 * b / delta).ln()).sqrt()
}

/// Cover score from subset sizes. Terms are summed in ascending size order,
/// so covers with equal size multisets score identically.
pub fn cover_score(sizes: &[usize], n: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    Ok(score_sum(sizes, delta).powi(2) / n as f64)
}

fn score_sum(sizes: &[usize], delta: f64) -> f64 {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.iter().map(|&s| term(s, delta)).sum()
}

/// Scans nodes in `ordering`; each joins the first subset it commutes with
/// entirely, else opens a new one.
pub fn greedy_cover(graph: &CommutationGraph, ordering: &[usize]) -> Result<Cover> {
    let n = graph.len();
    let mut seen = vec![false; n];
    if ordering.len() != n || ordering.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::invalid("ordering is not a permutation of the graph nodes"));
    }
    Ok(Cover::from_indices(graph.nodes(), greedy_blocks(graph, ordering)))
}

fn greedy_blocks(graph: &CommutationGraph, ordering: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<(Vec<usize>, Bits)> = Vec::new();
    for &i in ordering {
        match blocks.iter_mut().find(|(_, common)| common.get(i)) {
            Some((members, common)) => {
                members.push(i);
                common.and_assign(graph.row(i));
            }
            None => blocks.push((vec![i], graph.row(i).clone())),
        }
    }
    blocks.into_iter().map(|(m, _)| m).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverStrategy {
    /// Greedy over the lexicographic ordering plus `restarts` seeded random
    /// orderings; the lowest score wins.
    GreedyMulti { restarts: usize, seed: u64 },
    /// Every clique partition; the true minimizer.
    Exhaustive,
}

impl Default for CoverStrategy {
    fn default() -> Self {
        CoverStrategy::GreedyMulti { restarts: DEFAULT_RESTARTS, seed: 0 }
    }
}

impl fmt::Display for CoverStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverStrategy::GreedyMulti { .. } => f.write_str("greedy-multi"),
            CoverStrategy::Exhaustive => f.write_str("exhaustive"),
        }
    }
}

impl FromStr for CoverStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "greedy-multi" | "greedy" => Ok(Self::default()),
            "exhaustive" => Ok(Self::Exhaustive),
            other => Err(Error::parse(format!("unknown cover strategy {other:?}"))),
        }
    }
}

/// Lower score first; equal scores fall back to the canonical order.
fn better(a: &(f64, Cover), b: &(f64, Cover)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.1 < b.1,
    }
}

/// The lowest-score cover found by `strategy`.
pub fn best_cover(set: &DegreeSet, n: usize, delta: f64, strategy: CoverStrategy, exec: Exec) -> Result<Cover> {
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    if set.is_empty() {
        return Err(Error::invalid("cannot cover an empty degree set"));
    }
    let graph = CommutationGraph::new(set.clone());
    match strategy {
        CoverStrategy::GreedyMulti { restarts, seed } => {
            let streams = RngStreams::new(seed);
            let candidates = exec.map(restarts + 1, |r| {
                let mut ordering: Vec<usize> = (0..graph.len()).collect();
                if r > 0 {
                    ordering.shuffle(&mut streams.stream(Domain::Cover, r as u64));
                }
                let cover = Cover::from_indices(set, greedy_blocks(&graph, &ordering));
                (score_sum(&cover.sizes(), delta), cover)
            });
            let best = candidates.into_iter().reduce(|a, b| if better(&b, &a) { b } else { a }).expect("at least one ordering");
            Ok(best.1)
        }
        CoverStrategy::Exhaustive => {
            if set.len() > EXHAUSTIVE_MAX {
                return Err(Error::invalid(format!("exhaustive cover search is limited to {EXHAUSTIVE_MAX} strings, got {}", set.len())));
            }
            Ok(exhaustive(&graph, delta))
        }
    }
}

/// Enumerates clique partitions in restricted-growth order. The first
/// partition reaching the minimum sum is the lexicographically smallest.
fn exhaustive(graph: &CommutationGraph, delta: f64) -> Cover {
    struct Search<'a> {
        graph: &'a CommutationGraph,
        delta: f64,
        blocks: Vec<(Vec<usize>, Bits)>,
        best: Option<(f64, Vec<Vec<usize>>)>,
    }

    impl Search<'_> {
        fn visit(&mut self, i: usize) {
            if i == self.graph.len() {
                let sizes: Vec<usize> = self.blocks.iter().map(|(m, _)| m.len()).collect();
                let s = score_sum(&sizes, self.delta);
                if self.best.as_ref().is_none_or(|(b, _)| s < *b) {
                    self.best = Some((s, self.blocks.iter().map(|(m, _)| m.clone()).collect()));
                }
                return;
            }
            for k in 0..self.blocks.len() {
                if self.blocks[k].1.get(i) {
                    let saved = self.blocks[k].1.clone();
                    self.blocks[k].0.push(i);
                    self.blocks[k].1.and_assign(self.graph.row(i));
                    self.visit(i + 1);
                    self.blocks[k].0.pop();
                    self.blocks[k].1 = saved;
                }
            }
            self.blocks.push((vec![i], self.graph.row(i).clone()));
            self.visit(i + 1);
            self.blocks.pop();
        }
    }

    let mut search = Search { graph, delta, blocks: Vec::new(), best: None };
    search.visit(0);
    let (_, blocks) = search.best.expect("the singleton partition always exists");
    Cover::from_indices(graph.nodes(), blocks)
}
