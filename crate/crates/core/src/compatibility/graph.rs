use crate::operator::{ComplexMatrix, HermitianOperator};
use crate::pauli::{DegreeSet, PauliString};
use crate::{Error, Result};

/// True when `σ^s` and `σ^t` commute: the number of positions where both
/// are non-identity and differ is even.
pub fn pauli_commute(s: &PauliString, t: &PauliString) -> Result<bool> {
    if s.d() != t.d() {
        return Err(Error::DimensionMismatch { expected: s.d(), got: t.d() });
    }
    Ok(s.commutes_with(t))
}

/// Fixed-width bitset over node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn zeros(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn and_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }
}

/// Commutation relation over a degree set. Node `i` is `nodes.strings()[i]`.
#[derive(Debug, Clone)]
pub struct CommutationGraph {
    nodes: DegreeSet,
    rows: Vec<Bits>,
}

impl CommutationGraph {
    pub fn new(nodes: DegreeSet) -> Self {
        let strings = nodes.strings();
        let n = strings.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = Bits::zeros(n);
                for j in 0..n {
                    if strings[i].commutes_with(&strings[j]) {
                        row.set(j);
                    }
                }
                row
            })
            .collect();
        Self { nodes, rows }
    }

    pub fn nodes(&self) -> &DegreeSet {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub(crate) fn row(&self, i: usize) -> &Bits {
        &self.rows[i]
    }

    /// True when the indexed nodes pairwise commute.
    pub fn is_clique(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(a, &i)| members[a + 1..].iter().all(|&j| self.commute(i, j)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| (i + 1..self.len()).filter(|&j| self.commute(i, j)).count()).sum()
    }
}

/// `build_commutation_graph(A)`
pub fn build_commutation_graph(set: &DegreeSet) -> CommutationGraph {
    CommutationGraph::new(set.clone())
}

/// Effects `Γ_w = Π_ℓ ½(I + w_ℓ σ^{s_ℓ} ⊗ F_Y)` of the fine-grained reference
/// measurement for a commuting set, on the joint system with the label qubit
/// last. Effect index bit `ℓ` (least significant first) set means `w_ℓ = −1`.
pub fn reference_effects(clique: &[PauliString]) -> Result<Vec<HermitianOperator>> {
    let first = clique.first().ok_or_else(|| Error::invalid("empty clique"))?;
    let d = first.d();
    for (a, s) in clique.iter().enumerate() {
        for t in &clique[a + 1..] {
            if !pauli_commute(s, t)? {
                return Err(Error::NonCommuting { a: s.to_string(), b: t.to_string() });
            }
        }
    }
    if clique.len() > 16 {
        return Err(Error::invalid(format!("clique of size {} has too many reference outcomes", clique.len())));
    }
    let label = ComplexMatrix::from_diag(&[-1.0, 1.0]);
    let observables = clique.iter().map(|s| s.matrix()?.matrix().kron(&label)).collect::<Result<Vec<ComplexMatrix>>>()?;
    let dim = 1usize << (d + 1);
    let id = ComplexMatrix::identity(dim);
    let m = clique.len();
    (0..1usize << m)
        .map(|w| {
            let mut g = id.clone();
            for (l, obs) in observables.iter().enumerate() {
                let sign = if w >> l & 1 == 1 { -1.0 } else { 1.0 };
                let mut lambda = id.clone();
                lambda.axpy(sign, obs);
                g = g.matmul(&lambda.scale(0.5));
            }
            Ok(HermitianOperator::from_hermitian(g.hermitian_part()))
        })
        .collect()
}
