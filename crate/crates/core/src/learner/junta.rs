use crate::exec::Exec;
use crate::operator::{normalized_trace_norm, ComplexMatrix, HermitianOperator};
use crate::pauli::{synthesize, FourierTable};
use crate::simulator::SampleSource;
use crate::{Error, Result};

/// All `k`-subsets of `0..d` in lexicographic order.
pub fn k_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=d - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= d {
        rec(0, d, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Partial trace of a `d`-qubit matrix over every qubit outside `coords`.
pub fn partial_trace_keep(m: &ComplexMatrix, coords: &[usize], d: usize) -> Result<ComplexMatrix> {
    if m.dim() != 1 << d {
        return Err(Error::DimensionMismatch { expected: 1 << d, got: m.dim() });
    }
    if coords.iter().any(|&c| c >= d) || coords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("coordinates must be strictly increasing and below d"));
    }
    let k = coords.len();
    let rest: Vec<usize> = (0..d).filter(|c| !coords.contains(c)).collect();
    let place = |bits: usize, at: &[usize]| {
        at.iter().enumerate().fold(0usize, |acc, (i, &c)| acc | ((bits >> (at.len() - 1 - i) & 1) << (d - 1 - c)))
    };
    let inner: Vec<usize> = (0..1 << k).map(|a| place(a, coords)).collect();
    let outer: Vec<usize> = (0..1 << rest.len()).map(|e| place(e, &rest)).collect();
    Ok(ComplexMatrix::from_fn(1 << k, |a, b| outer.iter().map(|&e| m[(inner[a] | e, inner[b] | e)]).sum()))
}

/// `F̃_J = Σ_{supp(s)⊆J} f_s σ^{s_J}` on the `|J|` qubits of `J`, built from a
/// coefficient table. Its normalized trace norm equals `‖F^{⊆J}‖_{1,ρ}` for
/// `ρ = I/2^d`.
pub fn reduced_operator(table: &FourierTable, coords: &[usize]) -> Result<HermitianOperator> {
    if coords.is_empty() {
        return Err(Error::invalid("reduced operator needs at least one coordinate"));
    }
    let mut local = FourierTable::new(coords.len());
    for (s, v) in table.restrict_to_subset(coords).iter() {
        local.insert(s.project(coords)?, v)?;
    }
    synthesize(&local)
}

/// `opt(k) = ½ − ½ max_{|J|=k} ‖F^{⊆J}‖_{1,ρ}` with the lexicographically
/// first maximizer. Requires a maximally mixed X-marginal.
pub fn opt_k(source: &SampleSource, k: usize) -> Result<(f64, Vec<usize>)> {
    opt_k_with(source, k, Exec::default())
}

pub fn opt_k_with(source: &SampleSource, k: usize, exec: Exec) -> Result<(f64, Vec<usize>)> {
    let d = source.d();
    if k > d {
        return Err(Error::invalid(format!("k = {k} exceeds d = {d}")));
    }
    if !source.is_maximally_mixed() {
        return Err(Error::HypothesisViolated("the X-marginal is not maximally mixed".into()));
    }
    let subsets = k_subsets(d, k);
    let scale = (1u64 << k) as f64;
    let norms = exec.try_map(subsets.len(), |i| {
        let m = partial_trace_keep(source.signed_state().matrix(), &subsets[i], d)?.scale(scale);
        normalized_trace_norm(&HermitianOperator::from_hermitian(m.hermitian_part()))
    })?;
    let (best, norm) = argmax_first(&norms);
    Ok(((0.5 - 0.5 * norm).clamp(0.0, 0.5), subsets[best].clone()))
}

/// Index of the first maximum.
pub(crate) fn argmax_first(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}
