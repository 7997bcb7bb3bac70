use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{normal_quantile, ConfidenceInterval};

/// Lengths of the two intervals the overlap is read against, wider first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionAssumption {
    pub l1: f64,
    pub l2: f64,
}

impl InversionAssumption {
    /// Lengths may be given in either order.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::arg(format!(
                "interval lengths must be positive, got {a} and {b}"
            )));
        }
        Ok(Self {
            l1: a.max(b),
            l2: a.min(b),
        })
    }

    /// Overlap beyond which the narrower interval sits inside the wider one.
    pub fn nu_max(&self) -> f64 {
        0.5 * (1.0 + self.l2 / self.l1)
    }
}

/// Equal interval lengths 2·z·σ̂ₒ·√(n₀/n) under σ(β̂) = σ(γ̂) = σ̂ₒ at the
/// original sample size, rescaled to the subset size.
pub fn null_assumption_lengths(
    sigma_hat_o: f64,
    n0: usize,
    n: usize,
    level: f64,
) -> Result<InversionAssumption> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::arg(format!("level {level} outside (0, 1)")));
    }
    if n == 0 || n0 == 0 {
        return Err(Error::arg("sample sizes must be positive"));
    }
    let sd = sigma_hat_o * (n0 as f64 / n as f64).sqrt();
    let l = 2.0 * normal_quantile((1.0 + level) / 2.0)? * sd;
    InversionAssumption::new(l, l)
}

/// |β − γ| implied by overlap `nu`:
/// ½(l₁ + l₂) − 2ν/(1/l₁ + 1/l₂) below ν_max, ½(l₁ − l₂) from ν_max on.
pub fn invert_overlap(nu: f64, a: &InversionAssumption) -> Result<f64> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::arg(format!("overlap {nu} outside [0, 1]")));
    }
    if nu >= a.nu_max() {
        return Ok(0.5 * (a.l1 - a.l2));
    }
    Ok(0.5 * (a.l1 + a.l2) - 2.0 * nu / (1.0 / a.l1 + 1.0 / a.l2))
}

/// Map a credible interval for ν̄ to one for |β − γ|. The map is
/// nonincreasing, so the endpoints swap.
pub fn invert_credible_interval(
    ci: &ConfidenceInterval,
    a: &InversionAssumption,
) -> Result<ConfidenceInterval> {
    ConfidenceInterval::new(
        invert_overlap(ci.upper, a)?,
        invert_overlap(ci.lower, a)?,
        ci.level,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::am::overlap_measure;

    #[test]
    fn application_lengths() {
        let a = null_assumption_lengths(177.0, 160_364, 160_364 / 25, 0.95).unwrap();
        assert!((a.l1 - 3469.1).abs() < 0.5, "{a:?}");
        let unit = null_assumption_lengths(1.0, 50, 50, 0.95).unwrap();
        assert!((unit.l1 - 3.919_928).abs() < 1e-6);
    }

    #[test]
    fn equal_lengths() {
        let a = InversionAssumption::new(4.0, 4.0).unwrap();
        for nu in [0.0, 0.2, 0.5, 0.9, 1.0] {
            assert!((invert_overlap(nu, &a).unwrap() - 4.0 * (1.0 - nu)).abs() < 1e-12);
        }
    }

    #[test]
    fn conventions_at_the_ends() {
        let a = InversionAssumption::new(1.0, 3.0).unwrap();
        assert_eq!((a.l1, a.l2), (3.0, 1.0));
        assert_eq!(invert_overlap(0.0, &a).unwrap(), 2.0);
        assert_eq!(invert_overlap(a.nu_max(), &a).unwrap(), 1.0);
        assert_eq!(invert_overlap(1.0, &a).unwrap(), 1.0);
        assert!(invert_overlap(1.01, &a).is_err());
    }

    #[test]
    fn roundtrip_through_geometry() {
        let a = InversionAssumption::new(3.0, 1.25).unwrap();
        let (lo, hi) = (0.5 * (a.l1 - a.l2), 0.5 * (a.l1 + a.l2));
        for k in 1..50 {
            let d = lo + (hi - lo) * k as f64 / 50.0;
            let i1 = ConfidenceInterval::new(-a.l1 / 2.0, a.l1 / 2.0, 0.95).unwrap();
            let i2 = ConfidenceInterval::new(d - a.l2 / 2.0, d + a.l2 / 2.0, 0.95).unwrap();
            let nu = overlap_measure(&i1, &i2).unwrap();
            assert!((invert_overlap(nu, &a).unwrap() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_inversion() {
        let a = InversionAssumption::new(2.0, 1.0).unwrap();
        let full = ConfidenceInterval::new(0.0, a.nu_max(), 0.9).unwrap();
        let out = invert_credible_interval(&full, &a).unwrap();
        assert_eq!((out.lower, out.upper), (0.5, 1.5));
        let point = ConfidenceInterval::new(0.3, 0.3, 0.9).unwrap();
        let out = invert_credible_interval(&point, &a).unwrap();
        assert_eq!(out.lower, out.upper);
    }
}
