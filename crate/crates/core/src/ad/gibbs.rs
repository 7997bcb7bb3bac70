use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::ad::{ADConfig, ADReleased};
use crate::dp::RngStream;
use crate::error::{Error, Result};
use crate::prior::BetaPrior;
use crate::summary::SampleSummary;

/// Kept draws of the Gibbs chain over (r, S) given the released count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ADPosterior {
    pub r_samples: Vec<f64>,
    pub s_samples: Vec<u32>,
    pub delta: f64,
    pub theta_hat: f64,
}

impl ADPosterior {
    pub fn theta_at(&self, delta: f64) -> f64 {
        theta_hat(&self.r_samples, delta)
    }

    pub fn summary(&self) -> SampleSummary {
        SampleSummary::of(&self.r_samples)
    }
}

/// Fraction of samples at or above `delta`.
pub fn theta_hat(r_samples: &[f64], delta: f64) -> f64 {
    if r_samples.is_empty() {
        return f64::NAN;
    }
    r_samples.iter().filter(|&&r| r >= delta).count() as f64 / r_samples.len() as f64
}

/// One draw of r | S ~ Beta(S + a, M − S + b).
pub fn draw_r(s: u32, subsets: usize, prior: BetaPrior, stream: &mut RngStream) -> f64 {
    let a = f64::from(s) + prior.a;
    let b = (subsets as f64 - f64::from(s)) + prior.b;
    Beta::new(a, b)
        .expect("positive Beta shapes")
        .sample(stream)
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Normalized conditional P(S = s | r, S^R) for s = 0..=M:
/// ∝ exp(−ε|S^R − s|)·C(M, s)·r^s·(1 − r)^(M−s).
pub fn s_conditional(r: f64, s_noisy: f64, subsets: usize, epsilon: f64) -> Vec<f64> {
    let ln_choose: Vec<f64> = (0..=subsets as u64)
        .map(|s| ln_binomial(subsets as u64, s))
        .collect();
    let mut w = vec![0.0; subsets + 1];
    s_weights(r, s_noisy, subsets, epsilon, &ln_choose, &mut w);
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w
}

// Unnormalized weights scaled so the largest is 1.
fn s_weights(
    r: f64,
    s_noisy: f64,
    subsets: usize,
    epsilon: f64,
    ln_choose: &[f64],
    out: &mut [f64],
) {
    let m = subsets as f64;
    let mut top = f64::NEG_INFINITY;
    for (s, slot) in out.iter_mut().enumerate() {
        let sf = s as f64;
        let lw =
            -epsilon * (s_noisy - sf).abs() + ln_choose[s] + xlogy(sf, r) + xlogy(m - sf, 1.0 - r);
        *slot = lw;
        top = top.max(lw);
    }
    for slot in out.iter_mut() {
        *slot = (*slot - top).exp();
    }
}

fn draw_index(weights: &[f64], stream: &mut RngStream) -> usize {
    let total: f64 = weights.iter().sum();
    let target = stream.uniform_open() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // round-off at the top end
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Posterior of r given the release, on the stream derived from the
/// configured seed.
pub fn gibbs_posterior(released: &ADReleased, config: &ADConfig) -> Result<ADPosterior> {
    let mut stream = RngStream::root(config.seed).derive("ad-gibbs", 0);
    gibbs_posterior_with(released, config, &mut stream)
}

/// Exact two-block Gibbs sampler. Starts from S = round(clamp(S^R, 0, M)) and
/// r = (S + a)/(M + a + b), discards `burn_in` sweeps and keeps `keep`.
pub fn gibbs_posterior_with(
    released: &ADReleased,
    config: &ADConfig,
    stream: &mut RngStream,
) -> Result<ADPosterior> {
    config.validate()?;
    if released.subsets != config.subsets {
        return Err(Error::arg(format!(
            "release was made with M = {} but the sampler is configured for M = {}",
            released.subsets, config.subsets
        )));
    }
    if (released.epsilon - config.epsilon.epsilon()).abs() > 1e-12 * released.epsilon {
        return Err(Error::arg(format!(
            "release was made with epsilon {} but the sampler is configured for {}",
            released.epsilon,
            config.epsilon.epsilon()
        )));
    }
    if !released.s_noisy.is_finite() {
        return Err(Error::arg("released count is not finite"));
    }
    let m = config.subsets;
    let eps = config.epsilon.epsilon();
    let prior = config.prior;
    let ln_choose: Vec<f64> = (0..=m as u64).map(|s| ln_binomial(m as u64, s)).collect();
    let mut weights = vec![0.0; m + 1];

    let mut s = released.s_noisy.clamp(0.0, m as f64).round() as u32;
    let mut r = (f64::from(s) + prior.a) / (m as f64 + prior.a + prior.b);
    let mut r_samples = Vec::with_capacity(config.keep);
    let mut s_samples = Vec::with_capacity(config.keep);
    for sweep in 0..config.burn_in + config.keep {
        s_weights(r, released.s_noisy, m, eps, &ln_choose, &mut weights);
        s = draw_index(&weights, stream) as u32;
        r = draw_r(s, m, prior, stream);
        if sweep >= config.burn_in {
            r_samples.push(r);
            s_samples.push(s);
        }
    }
    let theta = theta_hat(&r_samples, config.delta);
    Ok(ADPosterior {
        r_samples,
        s_samples,
        delta: config.delta,
        theta_hat: theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::PrivacyParams;

    fn released(s_noisy: f64, m: usize, eps: f64) -> ADReleased {
        ADReleased {
            s_noisy,
            subsets: m,
            epsilon: eps,
            ledger_entry: 0,
            timestamp: String::new(),
        }
    }

    fn config(m: usize, eps: f64) -> ADConfig {
        ADConfig::new(m, PrivacyParams::new(eps).unwrap())
    }

    #[test]
    fn two_point_conditional() {
        let p = s_conditional(0.5, 0.3, 1, 1.0);
        let want = (-0.3f64).exp() / ((-0.3f64).exp() + (-0.7f64).exp());
        assert!((p[0] - want).abs() < 1e-12);
        assert!((p[0] - 0.599).abs() < 1e-3);
    }

    #[test]
    fn conditional_handles_extreme_r() {
        let p = s_conditional(0.0, 3.0, 5, 1.0);
        assert_eq!(p[0], 1.0);
        let p = s_conditional(1.0, 3.0, 5, 1.0);
        assert_eq!(p[5], 1.0);
    }

    #[test]
    fn r_given_s_has_beta_mean() {
        let mut stream = RngStream::root(4);
        let draws: Vec<f64> = (0..20_000)
            .map(|_| draw_r(10, 20, BetaPrior::FLAT, &mut stream))
            .collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!((mean - 0.5).abs() < 0.01);
    }

    #[test]
    fn chain_shape_and_determinism() {
        let cfg = config(20, 1.0);
        let a = gibbs_posterior(&released(17.4, 20, 1.0), &cfg).unwrap();
        let b = gibbs_posterior(&released(17.4, 20, 1.0), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.r_samples.len(), 1000);
        assert!(a.r_samples.iter().all(|r| (0.0..=1.0).contains(r)));
        assert!(a.s_samples.iter().all(|&s| s <= 20));
        assert!(a.summary().median > 0.6);
    }

    #[test]
    fn far_boundary_truth_is_verified() {
        // S = M = 20 released at epsilon 1
        let p = gibbs_posterior(&released(20.3, 20, 1.0), &config(20, 1.0)).unwrap();
        assert!(p.theta_hat > 0.95, "{}", p.theta_hat);
    }

    #[test]
    fn theta_hat_cases() {
        assert_eq!(theta_hat(&[0.9; 50], 0.5), 1.0);
        let sym: Vec<f64> = (0..100).map(|i| 0.005 + i as f64 / 100.0).collect();
        assert!((theta_hat(&sym, 0.5) - 0.5).abs() < 0.02);
    }

    #[test]
    fn mismatched_config_refused() {
        assert!(gibbs_posterior(&released(3.0, 10, 1.0), &config(20, 1.0)).is_err());
        assert!(gibbs_posterior(&released(3.0, 20, 0.5), &config(20, 1.0)).is_err());
    }
}
