use crate::dp::RngStream;
use crate::error::{Error, Result};

/// One draw from Laplace(0, scale) by inverting the CDF of a single 53-bit
/// uniform. Exactly one `u64` is consumed per draw.
pub fn laplace_sample(stream: &mut RngStream, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::arg(format!(
            "Laplace scale must be positive, got {scale}"
        )));
    }
    Ok(laplace_inverse_cdf(stream.uniform_open(), scale))
}

/// Inverse CDF of Laplace(0, scale) at `u` in (0, 1).
pub fn laplace_inverse_cdf(u: f64, scale: f64) -> f64 {
    if u < 0.5 {
        scale * (2.0 * u).ln()
    } else {
        -scale * (2.0 * (1.0 - u)).ln()
    }
}

/// Log density of Laplace(location, scale) at `x`.
pub fn laplace_log_density(x: f64, location: f64, scale: f64) -> f64 {
    -(x - location).abs() / scale - (2.0 * scale).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draws(seed: u64, scale: f64, n: usize) -> Vec<f64> {
        let mut s = RngStream::root(seed).derive("laplace-test", 0);
        (0..n)
            .map(|_| laplace_sample(&mut s, scale).unwrap())
            .collect()
    }

    #[test]
    fn variance_is_two_b_squared() {
        let b = 1.7;
        let x = draws(1, b, 1_000_000);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() - 1) as f64;
        let target = 2.0 * b * b;
        assert!((var / target - 1.0).abs() < 0.02, "var {var} vs {target}");
    }

    #[test]
    fn tail_beyond_three_scales() {
        let b = 0.5;
        let x = draws(2, b, 1_000_000);
        let frac = x.iter().filter(|v| v.abs() > 3.0 * b).count() as f64 / x.len() as f64;
        // closed-form tail P(|η| > 3b) = e^{-3}
        assert!((frac - (-3.0f64).exp()).abs() < 0.003, "{frac}");
    }

    #[test]
    fn median_is_zero() {
        let x = draws(3, 1.0, 1_000_000);
        let pos = x.iter().filter(|v| **v > 0.0).count() as f64 / x.len() as f64;
        assert!((pos - 0.5).abs() < 0.002, "{pos}");
    }

    #[test]
    fn deterministic_for_a_fixed_path() {
        assert_eq!(draws(9, 2.0, 100), draws(9, 2.0, 100));
        assert_ne!(draws(9, 2.0, 100), draws(10, 2.0, 100));
    }

    #[test]
    fn bad_scale() {
        let mut s = RngStream::root(0);
        assert!(laplace_sample(&mut s, 0.0).is_err());
        assert!(laplace_sample(&mut s, -1.0).is_err());
        assert!(laplace_sample(&mut s, f64::INFINITY).is_err());
    }

    #[test]
    fn inverse_cdf_is_symmetric() {
        for u in [0.01, 0.2, 0.4999] {
            assert!((laplace_inverse_cdf(u, 2.0) + laplace_inverse_cdf(1.0 - u, 2.0)).abs() < 1e-9);
        }
        assert_eq!(laplace_inverse_cdf(0.5, 3.0), 0.0);
    }
}
