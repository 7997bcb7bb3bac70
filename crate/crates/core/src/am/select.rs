use crate::error::{Error, Result};

/// Variance cap for ν ∈ [0, 1] with no further assumption.
pub const WORST_CASE_VARIANCE: f64 = 0.25;
/// Variance of a uniform ν.
pub const UNIFORM_VARIANCE: f64 = 1.0 / 12.0;

/// Chebyshev bound on P(|ν̄^L − E[ν | n]| ≥ ω):
/// (1/ω²)·(variance_cap/M + 2/(M²ε²)).
pub fn error_bound(subsets: usize, epsilon: f64, omega: f64, variance_cap: f64) -> Result<f64> {
    if subsets == 0 {
        return Err(Error::arg("M must be positive"));
    }
    if !(epsilon > 0.0 && omega > 0.0 && variance_cap >= 0.0) {
        return Err(Error::arg(
            "error bound needs epsilon > 0, omega > 0 and a nonnegative variance cap",
        ));
    }
    let m = subsets as f64;
    Ok((variance_cap / m + 2.0 / (m * m * epsilon * epsilon)) / (omega * omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        let b = error_bound(25, 1.0, 0.2, WORST_CASE_VARIANCE).unwrap();
        assert!((b - 0.33).abs() < 1e-12);
        let u = error_bound(25, 1.0, 0.2, UNIFORM_VARIANCE).unwrap();
        assert!((u - 0.163_333_333_333).abs() < 1e-9);
    }

    #[test]
    fn vanishes_with_m() {
        let big = error_bound(1_000_000, 1.0, 0.2, WORST_CASE_VARIANCE).unwrap();
        assert!(big < 1e-4);
        assert!(
            error_bound(50, 1.0, 0.2, 0.25).unwrap() < error_bound(25, 1.0, 0.2, 0.25).unwrap()
        );
    }
}
