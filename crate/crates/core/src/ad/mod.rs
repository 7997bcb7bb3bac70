//! Alternative-data verification.
//!
//! The confidential data are split into M subsets, the model is refit on each
//! one, and the number S of subset estimates that land in a tolerance region
//! is released as `S + Laplace(0, 1/ε)`. Treating each hit as a Bernoulli(r)
//! draw, the released count is turned into a posterior for r and summarized
//! by θ̂ = Pr(r ≥ δ | S^R).

pub mod contour;
pub mod delta;
pub mod gibbs;
pub mod indicator;
pub mod region;

use serde::{Deserialize, Serialize};

pub use contour::{
    robustness_contour, robustness_contour_with, straddle_distance, ContourInputs, RobustnessGrid,
};
pub use delta::{delta_star, suggested_delta};
pub use gibbs::{
    draw_r, gibbs_posterior, gibbs_posterior_with, s_conditional, theta_hat, ADPosterior,
};
pub use indicator::{
    compute_indicator_count, release_count, ADReleased, IndicatorCount, SubsetEstimate,
};
pub use region::{
    build_fixed_region, build_inflated_region, Inflation, RegionKind, RegionSpec, ToleranceRegion,
};

use crate::dp::PrivacyParams;
use crate::error::{Error, Result};
use crate::prior::BetaPrior;

pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_BURN_IN: usize = 500;
pub const DEFAULT_KEEP: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ADConfig {
    #[serde(rename = "M")]
    pub subsets: usize,
    pub epsilon: PrivacyParams,
    pub delta: f64,
    pub prior: BetaPrior,
    pub burn_in: usize,
    pub keep: usize,
    pub seed: u64,
}

impl ADConfig {
    pub fn new(subsets: usize, epsilon: PrivacyParams) -> Self {
        Self {
            subsets,
            epsilon,
            delta: DEFAULT_DELTA,
            prior: BetaPrior::FLAT,
            burn_in: DEFAULT_BURN_IN,
            keep: DEFAULT_KEEP,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsets < 2 {
            return Err(Error::arg(format!(
                "M must be at least 2, got {}",
                self.subsets
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::arg(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        BetaPrior::new(self.prior.a, self.prior.b)?;
        if self.keep == 0 {
            return Err(Error::arg("keep must be positive"));
        }
        Ok(())
    }
}
