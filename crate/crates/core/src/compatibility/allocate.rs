use serde::{Deserialize, Serialize};

use super::Cover;
use crate::{Error, Result};

/// Sample counts per cover subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchPlan {
    pub sizes: Vec<usize>,
    pub total: usize,
}

impl BatchPlan {
    /// Half-open sample index range of batch `j` when batches are laid out
    /// consecutively.
    pub fn range(&self, j: usize) -> std::ops::Range<usize> {
        let start: usize = self.sizes[..j].iter().sum();
        start..start + self.sizes[j]
    }
}

/// `b_j = |B_j| ln(2|B_j|/δ)`
pub fn batch_weights(sizes: &[usize], delta: f64) -> Vec<f64> {
    sizes.iter().map(|&s| s as f64 * (2.0 * s as f64 / delta).ln()).collect()
}

/// `Σ_j b_j / x_j`
pub fn allocation_objective(weights: &[f64], plan: &[usize]) -> f64 {
    weights.iter().zip(plan).map(|(b, &x)| b / x as f64).sum()
}

/// Splits `n` samples across the subsets of `cover` to minimize `Σ b_j/n_j`.
pub fn allocate_batches(n: usize, cover: &Cover, delta: f64) -> Result<BatchPlan> {
    allocate_sizes(n, &cover.sizes(), delta)
}

/// Floors the real optimum `n_j* ∝ √b_j` (at least 1 each), then moves
/// single samples by largest marginal gain until the total is `n`. Ties go
/// to the lowest index.
pub fn allocate_sizes(n: usize, subset_sizes: &[usize], delta: f64) -> Result<BatchPlan> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let m = subset_sizes.len();
    if m == 0 {
        return Err(Error::invalid("cover has no subsets"));
    }
    if n < m {
        return Err(Error::invalid(format!("{n} samples cannot fill {m} batches")));
    }
    let b = batch_weights(subset_sizes, delta);
    let roots: Vec<f64> = b.iter().map(|x| x.sqrt()).collect();
    let total_root: f64 = roots.iter().sum();
    let mut x: Vec<usize> = roots.iter().map(|r| ((n as f64 * r / total_root).floor() as usize).max(1)).collect();
    let mut sum: usize = x.iter().sum();
    while sum > n {
        // Remove where the objective grows least.
        let j = (0..m)
            .filter(|&j| x[j] > 1)
            .min_by(|&i, &j| {
                let gi = b[i] / (x[i] - 1) as f64 - b[i] / x[i] as f64;
                let gj = b[j] / (x[j] - 1) as f64 - b[j] / x[j] as f64;
                gi.total_cmp(&gj).then(i.cmp(&j))
            })
            .expect("n ≥ m leaves a batch above 1");
        x[j] -= 1;
        sum -= 1;
    }
    while sum < n {
        let j = (0..m)
            .max_by(|&i, &j| {
                let gi = b[i] / x[i] as f64 - b[i] / (x[i] + 1) as f64;
                let gj = b[j] / x[j] as f64 - b[j] / (x[j] + 1) as f64;
                gi.total_cmp(&gj).then(j.cmp(&i))
            })
            .expect("m ≥ 1");
        x[j] += 1;
        sum += 1;
    }
    Ok(BatchPlan { sizes: x, total: n })
}
