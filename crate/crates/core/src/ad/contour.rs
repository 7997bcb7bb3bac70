use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ad::region::ToleranceRegion;
use crate::dp::{laplace_sample, PrivacyParams, RngStream};
use crate::error::{Error, Result};
use crate::summary::{quantile_sorted, sorted};

/// Smallest K accepted by [`robustness_contour`].
pub const MIN_REPLICATIONS: usize = 100;
pub const DEFAULT_REPLICATIONS: usize = 750;

/// Robustness statistic T over a (γ, M) grid. `t[i][j]` belongs to
/// `gamma_axis[i]` and `m_axis[j]`; `q10`/`q90` are the r_obs quantiles
/// behind each cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessGrid {
    pub gamma_axis: Vec<f64>,
    pub m_axis: Vec<usize>,
    pub t: Vec<Vec<f64>>,
    pub q10: Vec<Vec<f64>>,
    pub q90: Vec<Vec<f64>>,
    pub replications: usize,
}

/// Published quantities the simulation is allowed to use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourInputs {
    pub sigma_hat_o: f64,
    pub n0: usize,
    pub n_total: usize,
    pub epsilon: PrivacyParams,
    pub replications: usize,
    pub seed: u64,
}

/// Distance from 0.5 to [q₀.₁, q₀.₉]; zero when the interval straddles 0.5.
pub fn straddle_distance(q10: f64, q90: f64) -> f64 {
    if q10 > 0.5 {
        q10 - 0.5
    } else if q90 < 0.5 {
        0.5 - q90
    } else {
        0.0
    }
}

/// Simulated r_obs = (S + η)/M for one cell, K times. Subset estimates are
/// drawn from N(γ, (n₀/n)·σ̂ₒ²) with n = ⌊N/M⌋.
pub fn simulate_r_obs(
    gamma: f64,
    subsets: usize,
    region: &ToleranceRegion,
    inputs: &ContourInputs,
    stream: &mut RngStream,
) -> Result<Vec<f64>> {
    let n = inputs.n_total / subsets;
    if n == 0 {
        return Err(Error::arg(format!(
            "M = {subsets} exceeds N = {}",
            inputs.n_total
        )));
    }
    let sd = inputs.sigma_hat_o * (inputs.n0 as f64 / n as f64).sqrt();
    let scale = 1.0 / inputs.epsilon.epsilon();
    let mut out = Vec::with_capacity(inputs.replications);
    for _ in 0..inputs.replications {
        let mut s = 0usize;
        for _ in 0..subsets {
            let z: f64 = StandardNormal.sample(stream);
            if region.contains(gamma + sd * z) {
                s += 1;
            }
        }
        let eta = laplace_sample(stream, scale)?;
        out.push((s as f64 + eta) / subsets as f64);
    }
    Ok(out)
}

/// Choose M without touching confidential data or spending budget. Cells run
/// in parallel; cell `(i, j)` draws from stream `(seed, "ad-contour", i·|M| + j)`
/// so the grid does not depend on scheduling.
pub fn robustness_contour(
    gamma_axis: &[f64],
    m_axis: &[usize],
    region: &ToleranceRegion,
    inputs: &ContourInputs,
) -> Result<RobustnessGrid> {
    robustness_contour_with(gamma_axis, m_axis, |_| Ok(*region), inputs)
}

/// As [`robustness_contour`], with the region allowed to depend on M (an
/// inflated region widens as the subsets shrink).
pub fn robustness_contour_with<F>(
    gamma_axis: &[f64],
    m_axis: &[usize],
    region_for: F,
    inputs: &ContourInputs,
) -> Result<RobustnessGrid>
where
    F: Fn(usize) -> Result<ToleranceRegion> + Sync,
{
    if gamma_axis.is_empty() || m_axis.is_empty() {
        return Err(Error::arg("contour grids must be nonempty"));
    }
    if inputs.replications < MIN_REPLICATIONS {
        return Err(Error::arg(format!(
            "need at least {MIN_REPLICATIONS} replications per cell, got {}",
            inputs.replications
        )));
    }
    if !(inputs.sigma_hat_o > 0.0 && inputs.sigma_hat_o.is_finite()) {
        return Err(Error::arg("published standard error must be positive"));
    }
    if inputs.n0 == 0 {
        return Err(Error::arg("original sample size must be positive"));
    }
    if let Some(&m) = m_axis.iter().find(|&&m| m == 0 || m > inputs.n_total) {
        return Err(Error::arg(format!(
            "M = {m} must lie in 1..={}",
            inputs.n_total
        )));
    }
    let regions: Vec<ToleranceRegion> = m_axis
        .iter()
        .map(|&m| region_for(m))
        .collect::<Result<_>>()?;
    let root = RngStream::root(inputs.seed);
    let cols = m_axis.len();
    let cells: Vec<(f64, f64)> = (0..gamma_axis.len() * cols)
        .into_par_iter()
        .map(|cell| {
            let mut stream = root.derive("ad-contour", cell as u64);
            let j = cell % cols;
            let r = simulate_r_obs(
                gamma_axis[cell / cols],
                m_axis[j],
                &regions[j],
                inputs,
                &mut stream,
            )?;
            let r = sorted(&r);
            Ok((quantile_sorted(&r, 0.1), quantile_sorted(&r, 0.9)))
        })
        .collect::<Result<_>>()?;
    let grid = |f: &dyn Fn(f64, f64) -> f64| -> Vec<Vec<f64>> {
        cells
            .chunks(cols)
            .map(|row| row.iter().map(|&(a, b)| f(a, b)).collect())
            .collect()
    };
    Ok(RobustnessGrid {
        gamma_axis: gamma_axis.to_vec(),
        m_axis: m_axis.to_vec(),
        t: grid(&straddle_distance),
        q10: grid(&|a, _| a),
        q90: grid(&|_, b| b),
        replications: inputs.replications,
    })
}
