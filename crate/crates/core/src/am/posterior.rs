use serde::{Deserialize, Serialize};

use crate::am::{AMConfig, AMReleased};
use crate::dp::RngStream;
use crate::error::{Error, Result};
use crate::model::ConfidenceInterval;
use crate::prior::BetaPrior;
use crate::summary::SampleSummary;

/// Grid posterior of ν̄ given the released ν̄^L:
/// p(ν̄ | ν̄^L) ∝ exp(−Mε|ν̄ − ν̄^L|)·ν̄^(a−1)·(1 − ν̄)^(b−1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AMPosterior {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
    pub samples: Vec<f64>,
    /// Endpoints 0 and 1 were left out because the prior is unbounded there.
    pub open_grid: bool,
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Unnormalized log density.
pub fn log_density(nu: f64, nu_noisy: f64, subsets: usize, epsilon: f64, prior: BetaPrior) -> f64 {
    -(subsets as f64) * epsilon * (nu - nu_noisy).abs()
        + xlogy(prior.a - 1.0, nu)
        + xlogy(prior.b - 1.0, 1.0 - nu)
}

/// Deterministic density on a uniform grid, trapezoid normalization, then
/// `config.draws` samples by inverse CDF on stream `(seed, "am-posterior", 0)`.
pub fn posterior_nu(released: &AMReleased, config: &AMConfig) -> Result<AMPosterior> {
    let mut stream = RngStream::root(config.seed).derive("am-posterior", 0);
    posterior_nu_with(released, config, &mut stream)
}

pub fn posterior_nu_with(
    released: &AMReleased,
    config: &AMConfig,
    stream: &mut RngStream,
) -> Result<AMPosterior> {
    config.validate()?;
    if released.subsets != config.subsets {
        return Err(Error::arg(format!(
            "release was made with M = {} but the posterior is configured for M = {}",
            released.subsets, config.subsets
        )));
    }
    if (released.epsilon - config.epsilon.epsilon()).abs() > 1e-12 * released.epsilon {
        return Err(Error::arg(format!(
            "release was made with epsilon {} but the posterior is configured for {}",
            released.epsilon,
            config.epsilon.epsilon()
        )));
    }
    let mut post = grid_posterior(
        released.nu_bar_noisy,
        config.subsets,
        config.epsilon.epsilon(),
        config.prior,
        config.grid_points,
    )?;
    post.samples = (0..config.draws)
        .map(|_| post.quantile(stream.uniform_open()))
        .collect();
    Ok(post)
}

/// Density and CDF only; `samples` is left empty.
pub fn grid_posterior(
    nu_noisy: f64,
    subsets: usize,
    epsilon: f64,
    prior: BetaPrior,
    grid_points: usize,
) -> Result<AMPosterior> {
    if grid_points < 3 {
        return Err(Error::arg("posterior grid needs at least 3 points"));
    }
    if !nu_noisy.is_finite() {
        return Err(Error::arg("released overlap is not finite"));
    }
    let open_grid = prior.a < 1.0 || prior.b < 1.0;
    let g = grid_points as f64;
    let grid: Vec<f64> = if open_grid {
        (0..grid_points)
            .map(|i| (i as f64 + 1.0) / (g + 1.0))
            .collect()
    } else {
        (0..grid_points).map(|i| i as f64 / (g - 1.0)).collect()
    };
    let logs: Vec<f64> = grid
        .iter()
        .map(|&x| log_density(x, nu_noisy, subsets, epsilon, prior))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut density: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let mut cdf = vec![0.0; grid_points];
    for i in 1..grid_points {
        cdf[i] = cdf[i - 1] + 0.5 * (density[i - 1] + density[i]) * (grid[i] - grid[i - 1]);
    }
    let total = cdf[grid_points - 1];
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::arg("posterior density does not normalize"));
    }
    density.iter_mut().for_each(|d| *d /= total);
    cdf.iter_mut().for_each(|c| *c /= total);
    Ok(AMPosterior {
        grid,
        density,
        cdf,
        samples: Vec::new(),
        open_grid,
    })
}

impl AMPosterior {
    /// Inverse of the grid CDF, linear between grid points.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let k = self.cdf.partition_point(|&c| c < p);
        if k == 0 {
            return self.grid[0];
        }
        if k >= self.cdf.len() {
            return *self.grid.last().unwrap();
        }
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let (x0, x1) = (self.grid[k - 1], self.grid[k]);
        x0 + (p - c0) / (c1 - c0) * (x1 - x0)
    }

    /// Trapezoid integral of the normalized density.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, |i| self.density[i])
    }

    pub fn mean(&self) -> f64 {
        trapezoid(&self.grid, |i| self.grid[i] * self.density[i])
    }

    pub fn sample_summary(&self) -> Option<SampleSummary> {
        (!self.samples.is_empty()).then(|| SampleSummary::of(&self.samples))
    }
}

fn trapezoid(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..x.len())
        .map(|i| 0.5 * (f(i - 1) + f(i)) * (x[i] - x[i - 1]))
        .sum()
}

/// Equal-tailed credible interval holding `mass` of the grid posterior.
pub fn credible_interval(posterior: &AMPosterior, mass: f64) -> Result<ConfidenceInterval> {
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::arg(format!("credible mass {mass} outside (0, 1)")));
    }
    ConfidenceInterval::new(
        posterior.quantile((1.0 - mass) / 2.0),
        posterior.quantile((1.0 + mass) / 2.0),
        mass,
    )
}
