use rand::Rng;

use super::Predictor;
use crate::exec::Exec;
use crate::operator::HermitianOperator;
use crate::rng::{Domain, RngStreams};
use crate::simulator::{labeling_operator, SampleSource};
use crate::{Error, Result};

const LOSS_SLACK: f64 = 1e-9;

fn clamp_loss(l: f64) -> Result<f64> {
    if !l.is_finite() || !(-LOSS_SLACK..=1.0 + LOSS_SLACK).contains(&l) {
        return Err(Error::invalid(format!("loss {l} outside [0, 1]")));
    }
    Ok(l.clamp(0.0, 1.0))
}

/// `L = ½ − ½ tr{(G ⊗ I_Y) F_Y ρ_XY}`, evaluated as `½ − ½ tr{G Δ}` on the
/// X block.
pub fn exact_loss(pred: &Predictor, source: &SampleSource) -> Result<f64> {
    exact_loss_of(pred.g_op(), source)
}

pub fn exact_loss_of(g: &HermitianOperator, source: &SampleSource) -> Result<f64> {
    if g.dim() != source.dim() {
        return Err(Error::DimensionMismatch { expected: source.dim(), got: g.dim() });
    }
    clamp_loss(0.5 - 0.5 * g.trace_product(source.signed_state().matrix()))
}

/// The same quantity built from the joint operators `G ⊗ I`, `F_Y` and
/// `ρ_XY`. Quadratic in the joint dimension; meant for cross-checks.
pub fn exact_loss_joint(pred: &Predictor, source: &SampleSource) -> Result<f64> {
    if pred.dim() != source.dim() {
        return Err(Error::DimensionMismatch { expected: source.dim(), got: pred.dim() });
    }
    let g = pred.g_op().tensor(&HermitianOperator::identity(2))?;
    let gf = g.matrix().matmul(labeling_operator(source.d())?.matrix());
    clamp_loss(0.5 - 0.5 * gf.matmul(source.joint_state()?.matrix()).trace().re)
}

/// Fraction of `n_test` simulated rounds whose measured outcome differs from
/// the hidden label. Round `i` runs on stream `(Test, i)`.
pub fn empirical_loss(pred: &Predictor, source: &SampleSource, n_test: usize, streams: &RngStreams, exec: Exec) -> Result<f64> {
    if n_test == 0 {
        return Err(Error::invalid("n_test must be positive"));
    }
    if pred.dim() != source.dim() {
        return Err(Error::DimensionMismatch { expected: source.dim(), got: pred.dim() });
    }
    let q1: Vec<f64> = source.components().iter().map(|c| pred.povm().probability_plus(&c.state)).collect::<Result<_>>()?;
    let errors = exec.map(n_test, |i| {
        let mut rng = streams.stream(Domain::Test, i as u64);
        let c = source.draw_component(&mut rng);
        let outcome = u8::from(rng.random::<f64>() < q1[c]);
        outcome != source.components()[c].label
    });
    Ok(errors.iter().filter(|&&e| e).count() as f64 / n_test as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    fn sigma(s: &str) -> HermitianOperator {
        s.parse::<PauliString>().unwrap().matrix().unwrap()
    }

    #[test]
    fn perfect_and_inverted_predictors() {
        let f = sigma("31");
        let src = SampleSource::realizable(&f).unwrap();
        let good = Predictor::from_sign_operator(f.clone()).unwrap();
        let bad = Predictor::from_sign_operator(f.scale(-1.0)).unwrap();
        assert_eq!(exact_loss(&good, &src).unwrap(), 0.0);
        assert_eq!(exact_loss(&bad, &src).unwrap(), 1.0);
        assert!((exact_loss_joint(&good, &src).unwrap()).abs() < 1e-12);
        let streams = RngStreams::new(3);
        assert_eq!(empirical_loss(&good, &src, 1000, &streams, Exec::default()).unwrap(), 0.0);
        assert_eq!(empirical_loss(&bad, &src, 1000, &streams, Exec::default()).unwrap(), 1.0);
    }

    #[test]
    fn empirical_loss_reproducible_across_policies() {
        let src = SampleSource::noisy(&sigma("3"), 0.3).unwrap();
        let p = Predictor::from_sign_operator(sigma("3")).unwrap();
        let streams = RngStreams::new(11);
        let a = empirical_loss(&p, &src, 5000, &streams, Exec::Sequential).unwrap();
        let b = empirical_loss(&p, &src, 5000, &streams, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!((a - 0.3).abs() < 4.0 * (0.21f64 / 5000.0).sqrt());
    }
}
