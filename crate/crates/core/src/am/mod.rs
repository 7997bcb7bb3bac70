//! Alternative-model comparison.
//!
//! Two specifications are fit on each of M subsets and the overlap of their
//! confidence intervals for a shared coefficient is averaged. The average is
//! released at sensitivity 1/M and turned into a grid posterior; credible
//! intervals for it can be inverted into a range for |β − γ|.

pub mod contour;
pub mod inversion;
pub mod overlap;
pub mod posterior;
pub mod select;

use serde::{Deserialize, Serialize};

pub use contour::{reference_contour, simulate_overlaps, ContourGrid};
pub use inversion::{
    invert_credible_interval, invert_overlap, null_assumption_lengths, InversionAssumption,
};
pub use overlap::{
    average_overlap, average_overlap_with, overlap_measure, release_overlap, OverlapResult,
};
pub use posterior::{
    credible_interval, grid_posterior, posterior_nu, posterior_nu_with, AMPosterior,
};
pub use select::{error_bound, UNIFORM_VARIANCE, WORST_CASE_VARIANCE};

use crate::dp::PrivacyParams;
use crate::error::{Error, Result};
use crate::prior::BetaPrior;

pub const DEFAULT_LEVEL: f64 = 0.95;
pub const DEFAULT_GRID_POINTS: usize = 10_001;
pub const DEFAULT_DRAWS: usize = 1_000;

/// The noisy average overlap ν̄^L. Never clamped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AMReleased {
    pub nu_bar_noisy: f64,
    pub subsets: usize,
    pub epsilon: f64,
    pub ledger_entry: usize,
    pub timestamp: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AMConfig {
    #[serde(rename = "M")]
    pub subsets: usize,
    pub epsilon: PrivacyParams,
    pub level: f64,
    pub prior: BetaPrior,
    pub grid_points: usize,
    pub draws: usize,
    pub seed: u64,
}

impl AMConfig {
    pub fn new(subsets: usize, epsilon: PrivacyParams) -> Self {
        Self {
            subsets,
            epsilon,
            level: DEFAULT_LEVEL,
            prior: BetaPrior::FLAT,
            grid_points: DEFAULT_GRID_POINTS,
            draws: DEFAULT_DRAWS,
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
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::arg(format!(
                "level must lie in (0, 1), got {}",
                self.level
            )));
        }
        BetaPrior::new(self.prior.a, self.prior.b)?;
        if self.grid_points < 3 {
            return Err(Error::arg("posterior grid needs at least 3 points"));
        }
        Ok(())
    }
}
