//! Closed-form error bounds. Logarithms are natural.

use crate::operator::normalized_trace_norm;
use crate::pauli::{synthesize, DegreeSet, FourierTable};
use crate::{Error, Result};

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!("{name} must be a finite nonnegative number, got {x}")));
    }
    Ok(())
}

/// `√(8/n · ln(2·count/δ))`: with probability at least `1 − δ` every one of
/// `count` jointly estimated coefficients is within this of its mean.
pub fn chernoff_band(n: usize, delta: f64, count: usize) -> Result<f64> {
    check_delta(delta)?;
    if n == 0 || count == 0 {
        return Err(Error::invalid("sample count and coefficient count must be positive"));
    }
    Ok((8.0 / n as f64 * (2.0 * count as f64 / delta).ln()).sqrt())
}

/// `U(x) = x³ + 3/2 x² + 5/4 x`
pub fn u_function(x: f64) -> Result<f64> {
    check_nonneg("x", x)?;
    Ok(x * x * x + 1.5 * x * x + 1.25 * x)
}

/// `2·opt + 2ε + 5β`
pub fn qld_error_bound(opt: f64, epsilon: f64, beta: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    check_nonneg("beta", beta)?;
    if !opt.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(2.0 * opt + 2.0 * epsilon + 5.0 * beta)
}

/// `opt_k + 5√ε'`
pub fn junta_error_bound(opt_k: f64, eps_prime: f64) -> Result<f64> {
    check_nonneg("epsilon'", eps_prime)?;
    if !opt_k.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(opt_k + 5.0 * eps_prime.sqrt())
}

/// `‖Σ_{s∈A} f_s σ^s‖_{1,ρ}` with `ρ = I/2^d`.
pub fn restricted_one_norm(table: &FourierTable, set: &DegreeSet) -> Result<f64> {
    if table.d() != set.d() {
        return Err(Error::DimensionMismatch { expected: set.d(), got: table.d() });
    }
    normalized_trace_norm(&synthesize(&table.restrict_to(set))?)
}

/// `½ − ½‖F^A‖_{1,ρ} − ε`, a lower bound on the optimum over any class
/// ε-concentrated around `A` when the X-marginal is maximally mixed.
pub fn popt_lower_bound(table: &FourierTable, set: &DegreeSet, epsilon: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    Ok(0.5 - 0.5 * restricted_one_norm(table, set)? - epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(u_function(0.0).unwrap(), 0.0);
        assert_eq!(u_function(1.0).unwrap(), 3.75);
        assert!(u_function(-1.0).is_err());
        assert_eq!(qld_error_bound(0.0, 0.0, 0.1).unwrap(), 0.5);
        assert_eq!(junta_error_bound(0.1, 0.04).unwrap(), 0.1 + 5.0 * 0.2);
        let band = chernoff_band(10_000, 0.05, 1).unwrap();
        assert!((band - (8.0f64 / 1e4 * 40f64.ln()).sqrt()).abs() < 1e-15);
        assert!(chernoff_band(10, 0.0, 1).is_err());
    }

    #[test]
    fn u_below_four_x_on_unit_interval() {
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            assert!(u_function(x).unwrap() <= 4.0 * x + 1e-15);
        }
    }
}
