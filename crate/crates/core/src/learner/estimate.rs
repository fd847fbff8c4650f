use crate::compatibility::{BatchPlan, Cover};
use crate::exec::Exec;
use crate::pauli::FourierTable;
use crate::rng::{Domain, RngStreams};
use crate::simulator::{measure_batch, CompatibleBatch, LabeledSample};
use crate::{Error, Result};

/// Splits `samples` in order into the plan's batches, measures batch `j`
/// with the reference measurement of subset `B_j`, and averages outcomes.
/// Sample `i` is measured on stream `(Measure, i)`.
pub fn fourier_estimation(
    samples: &[LabeledSample],
    cover: &Cover,
    plan: &BatchPlan,
    streams: &RngStreams,
    exec: Exec,
) -> Result<FourierTable> {
    if samples.is_empty() {
        return Err(Error::invalid("no samples to estimate from"));
    }
    if plan.sizes.len() != cover.len() {
        return Err(Error::invalid(format!("plan has {} batches, cover has {} subsets", plan.sizes.len(), cover.len())));
    }
    let total: usize = plan.sizes.iter().sum();
    if total != samples.len() {
        return Err(Error::invalid(format!("plan allots {total} samples, {} supplied", samples.len())));
    }
    let batches = cover.subsets().iter().map(|b| CompatibleBatch::new(b.clone())).collect::<Result<Vec<_>>>()?;
    let batch_of: Vec<usize> = plan.sizes.iter().enumerate().flat_map(|(j, &n)| std::iter::repeat_n(j, n)).collect();
    let outcomes =
        exec.try_map(samples.len(), |i| measure_batch(&samples[i], &batches[batch_of[i]], &mut streams.stream(Domain::Measure, i as u64)))?;
    let mut sums: Vec<Vec<i64>> = batches.iter().map(|b| vec![0; b.len()]).collect();
    for (i, w) in outcomes.iter().enumerate() {
        for (acc, &v) in sums[batch_of[i]].iter_mut().zip(w) {
            *acc += v as i64;
        }
    }
    let mut table = FourierTable::new(cover.d());
    for (j, b) in batches.iter().enumerate() {
        let n = plan.sizes[j];
        for (s, &sum) in b.strings().iter().zip(&sums[j]) {
            let v = if n == 0 { 0.0 } else { sum as f64 / n as f64 };
            table.insert(*s, v)?;
        }
    }
    Ok(table)
}
