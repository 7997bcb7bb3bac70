use crate::ad::region::check_scale;
use crate::error::Result;
use crate::model::normal_cdf;

/// Probability that a subset estimate lands in the inflated region when the
/// truth sits on an edge of the uninflated one:
/// Φ(α(1 + 1/s)) − Φ(α(1/s − 1)) with s = √(n₀/n).
pub fn delta_star(
    _gamma_hat_o: f64,
    sigma_hat_o: f64,
    alpha: f64,
    n0: usize,
    n: usize,
) -> Result<f64> {
    check_scale(sigma_hat_o, alpha, n0, n)?;
    let s = (n0 as f64 / n as f64).sqrt();
    Ok(normal_cdf(alpha * (1.0 + 1.0 / s)) - normal_cdf(alpha * (1.0 / s - 1.0)))
}

/// 0.9·δ*, the default certainty for inflated regions.
pub fn suggested_delta(
    gamma_hat_o: f64,
    sigma_hat_o: f64,
    alpha: f64,
    n0: usize,
    n: usize,
) -> Result<f64> {
    Ok(0.9 * delta_star(gamma_hat_o, sigma_hat_o, alpha, n0, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hundredfold_inflation() {
        let d = delta_star(0.0, 1.0, 1.96, 10_000, 100).unwrap();
        assert!((d - 0.9456).abs() < 5e-5, "{d}");
        assert!((suggested_delta(0.0, 1.0, 1.96, 10_000, 100).unwrap() - 0.9 * d).abs() < 1e-15);
    }

    #[test]
    fn no_inflation() {
        for alpha in [0.5, 1.0, 1.96, 3.0] {
            let d = delta_star(1.0, 0.2, alpha, 500, 500).unwrap();
            assert!((d - (normal_cdf(2.0 * alpha) - 0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn edge_placement_by_simulation() {
        // γ on the upper edge of U(γ̂ₒ; α), estimates ~ N(γ, s²σ²), hits in U*.
        use crate::dp::RngStream;
        use rand_distr::{Distribution, StandardNormal};
        let (g, sigma, alpha, n0, n) = (2.0, 0.5, 1.5, 900, 100);
        let s = 3.0;
        let edge = g + alpha * sigma;
        let (lo, hi) = (g - alpha * s * sigma, g + alpha * s * sigma);
        let mut stream = RngStream::root(8);
        let reps = 200_000;
        let hits = (0..reps)
            .filter(|_| {
                let z: f64 = StandardNormal.sample(&mut stream);
                let x = edge + s * sigma * z;
                lo <= x && x <= hi
            })
            .count();
        let d = delta_star(g, sigma, alpha, n0, n).unwrap();
        assert!((hits as f64 / reps as f64 - d).abs() < 0.005);
    }

    #[test]
    fn refuses_deflation() {
        assert!(delta_star(0.0, 1.0, 1.0, 10, 20).is_err());
    }
}
