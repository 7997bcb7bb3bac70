use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::am::overlap::overlap_measure;
use crate::dp::RngStream;
use crate::error::{Error, Result};
use crate::model::{ConfidenceInterval, Z_975};

pub const DEFAULT_CORR: f64 = 0.95;
pub const DEFAULT_REPLICATIONS: usize = 500;

/// Mean overlap over a grid of relative difference |γ − β|/|γ| (rows) and
/// standard-error ratio σ(β̂)/σ(γ̂) (columns). `mc_se` is the Monte-Carlo
/// standard error of each cell mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid {
    pub diff_axis: Vec<f64>,
    pub ratio_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub mc_se: Vec<Vec<f64>>,
    pub corr: f64,
    pub replications: usize,
}

/// Overlaps of normal 95% intervals for K correlated draws of (γ̂, β̂) with
/// means (γ, γ + diff·|γ|) and sds (σ_γ, ratio·σ_γ).
pub fn simulate_overlaps(
    gamma: f64,
    sigma_gamma: f64,
    corr: f64,
    diff: f64,
    ratio: f64,
    replications: usize,
    stream: &mut RngStream,
) -> Result<Vec<f64>> {
    let beta = gamma + diff * gamma.abs();
    let sigma_beta = ratio * sigma_gamma;
    let tail = (1.0 - corr * corr).max(0.0).sqrt();
    let (h1, h2) = (Z_975 * sigma_gamma, Z_975 * sigma_beta);
    (0..replications)
        .map(|_| {
            let z1: f64 = StandardNormal.sample(stream);
            let z2: f64 = StandardNormal.sample(stream);
            let g = gamma + sigma_gamma * z1;
            let b = beta + sigma_beta * (corr * z1 + tail * z2);
            overlap_measure(
                &ConfidenceInterval::new(g - h1, g + h1, 0.95)?,
                &ConfidenceInterval::new(b - h2, b + h2, 0.95)?,
            )
        })
        .collect()
}

/// Reference contour for reading a released overlap. Uses only
/// researcher-supplied inputs; no budget is spent. Cell `(i, j)` draws from
/// `(seed, "am-contour", i·|ratio| + j)`.
pub fn reference_contour(
    gamma: f64,
    sigma_gamma: f64,
    corr: f64,
    diff_axis: &[f64],
    ratio_axis: &[f64],
    replications: usize,
    seed: u64,
) -> Result<ContourGrid> {
    if !(sigma_gamma > 0.0 && sigma_gamma.is_finite()) {
        return Err(Error::arg(format!(
            "sigma must be positive, got {sigma_gamma}"
        )));
    }
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::arg(
            "gamma must be finite and nonzero (the difference axis is relative)",
        ));
    }
    if !(-1.0..=1.0).contains(&corr) {
        return Err(Error::arg(format!("correlation {corr} outside [-1, 1]")));
    }
    if diff_axis.is_empty() || ratio_axis.is_empty() {
        return Err(Error::arg("contour grids must be nonempty"));
    }
    if ratio_axis.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::arg("standard-error ratios must be positive"));
    }
    if replications < 2 {
        return Err(Error::arg("need at least 2 replications per cell"));
    }
    let root = RngStream::root(seed);
    let cols = ratio_axis.len();
    let cells: Vec<(f64, f64)> = (0..diff_axis.len() * cols)
        .into_par_iter()
        .map(|cell| {
            let mut stream = root.derive("am-contour", cell as u64);
            let nus = simulate_overlaps(
                gamma,
                sigma_gamma,
                corr,
                diff_axis[cell / cols],
                ratio_axis[cell % cols],
                replications,
                &mut stream,
            )?;
            let k = nus.len() as f64;
            let mean = nus.iter().sum::<f64>() / k;
            let var = nus.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            Ok((mean, (var / k).sqrt()))
        })
        .collect::<Result<_>>()?;
    Ok(ContourGrid {
        diff_axis: diff_axis.to_vec(),
        ratio_axis: ratio_axis.to_vec(),
        values: cells
            .chunks(cols)
            .map(|r| r.iter().map(|c| c.0).collect())
            .collect(),
        mc_se: cells
            .chunks(cols)
            .map(|r| r.iter().map(|c| c.1).collect())
            .collect(),
        corr,
        replications,
    })
}
