//! Release reports, custodian-only debug reports and contour CSVs.
//!
//! A release report carries the noisy scalar, the settings it was produced
//! under and summaries computed from it alone. Per-subset statistics only
//! ever go to the debug report.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ad::{ADConfig, ADPosterior, ADReleased, IndicatorCount, ToleranceRegion};
use crate::am::{
    credible_interval, grid_posterior, AMConfig, AMPosterior, AMReleased, InversionAssumption,
    OverlapResult,
};
use crate::error::{Error, Result};
use crate::model::ConfidenceInterval;
use crate::partition::PlanRecord;
use crate::prior::BetaPrior;
use crate::summary::SampleSummary;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub timestamp: String,
    pub engine_version: String,
    pub ledger_entry: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdRelease {
    pub s_noisy: f64,
    #[serde(rename = "M")]
    pub subsets: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub prior: BetaPrior,
    pub burn_in: usize,
    pub keep: usize,
    pub model: String,
    pub coef: String,
    pub region: ToleranceRegion,
    pub theta_hat: f64,
    pub r_summary: SampleSummary,
    pub r_samples: Vec<f64>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub assumption: InversionAssumption,
    pub interval: ConfidenceInterval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmRelease {
    pub nu_bar_noisy: f64,
    #[serde(rename = "M")]
    pub subsets: usize,
    pub epsilon: f64,
    pub prior: BetaPrior,
    pub level: f64,
    pub grid_points: usize,
    pub model: String,
    pub model_alt: String,
    pub coef: String,
    pub posterior_mean: f64,
    pub credible_intervals: Vec<ConfidenceInterval>,
    pub sample_summary: SampleSummary,
    pub samples: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion: Option<Inversion>,
    pub provenance: Provenance,
}

/// Everything that may cross the release boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "framework", rename_all = "lowercase")]
pub enum ReleaseReport {
    Ad(AdRelease),
    Am(AmRelease),
}

/// Credible masses reported for the AM posterior.
pub const REPORT_MASSES: [f64; 3] = [0.5, 0.9, 0.95];

impl AdRelease {
    pub fn new(
        released: &ADReleased,
        config: &ADConfig,
        posterior: ADPosterior,
        model: String,
        coef: String,
        region: ToleranceRegion,
    ) -> Self {
        Self {
            s_noisy: released.s_noisy,
            subsets: config.subsets,
            epsilon: released.epsilon,
            delta: config.delta,
            prior: config.prior,
            burn_in: config.burn_in,
            keep: config.keep,
            model,
            coef,
            region,
            theta_hat: posterior.theta_hat,
            r_summary: posterior.summary(),
            r_samples: posterior.r_samples,
            provenance: Provenance {
                seed: config.seed,
                timestamp: released.timestamp.clone(),
                engine_version: ENGINE_VERSION.into(),
                ledger_entry: released.ledger_entry,
            },
        }
    }
}

impl AmRelease {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        released: &AMReleased,
        config: &AMConfig,
        posterior: &AMPosterior,
        model: String,
        model_alt: String,
        coef: String,
        inversion: Option<Inversion>,
        extra_mass: Option<f64>,
    ) -> Result<Self> {
        Ok(Self {
            nu_bar_noisy: released.nu_bar_noisy,
            subsets: config.subsets,
            epsilon: released.epsilon,
            prior: config.prior,
            level: config.level,
            grid_points: config.grid_points,
            model,
            model_alt,
            coef,
            posterior_mean: posterior.mean(),
            credible_intervals: masses(extra_mass)
                .into_iter()
                .map(|m| credible_interval(posterior, m))
                .collect::<Result<_>>()?,
            sample_summary: SampleSummary::of(&posterior.samples),
            samples: posterior.samples.clone(),
            inversion,
            provenance: Provenance {
                seed: config.seed,
                timestamp: released.timestamp.clone(),
                engine_version: ENGINE_VERSION.into(),
                ledger_entry: released.ledger_entry,
            },
        })
    }
}

fn masses(extra: Option<f64>) -> Vec<f64> {
    let mut m = REPORT_MASSES.to_vec();
    if let Some(x) = extra {
        if !m.contains(&x) {
            m.push(x);
            m.sort_by(f64::total_cmp);
        }
    }
    m
}

/// Summaries recomputed from a report's own released value and samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recomputed {
    pub summary: SampleSummary,
    pub theta_hat: Option<f64>,
    pub credible_intervals: Vec<ConfidenceInterval>,
    pub posterior_mean: Option<f64>,
}

impl ReleaseReport {
    pub fn provenance(&self) -> &Provenance {
        match self {
            ReleaseReport::Ad(r) => &r.provenance,
            ReleaseReport::Am(r) => &r.provenance,
        }
    }

    /// Recompute the posterior summaries by post-processing only what the
    /// report itself contains.
    pub fn recompute(&self) -> Result<Recomputed> {
        match self {
            ReleaseReport::Ad(r) => Ok(Recomputed {
                summary: SampleSummary::of(&r.r_samples),
                theta_hat: Some(crate::ad::theta_hat(&r.r_samples, r.delta)),
                credible_intervals: Vec::new(),
                posterior_mean: None,
            }),
            ReleaseReport::Am(r) => {
                let post =
                    grid_posterior(r.nu_bar_noisy, r.subsets, r.epsilon, r.prior, r.grid_points)?;
                Ok(Recomputed {
                    summary: SampleSummary::of(&r.samples),
                    theta_hat: None,
                    credible_intervals: r
                        .credible_intervals
                        .iter()
                        .map(|ci| credible_interval(&post, ci.level))
                        .collect::<Result<_>>()?,
                    posterior_mean: Some(post.mean()),
                })
            }
        }
    }

    /// True when [`recompute`](Self::recompute) matches the stored summaries.
    pub fn is_consistent(&self) -> Result<bool> {
        let again = self.recompute()?;
        Ok(match self {
            ReleaseReport::Ad(r) => {
                again.summary == r.r_summary && again.theta_hat == Some(r.theta_hat)
            }
            ReleaseReport::Am(r) => {
                again.summary == r.sample_summary
                    && again.credible_intervals == r.credible_intervals
                    && again.posterior_mean == Some(r.posterior_mean)
            }
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

/// Custodian-only diagnostics for an AD run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdDebug {
    pub plan: PlanRecord,
    #[serde(rename = "S")]
    pub count: usize,
    #[serde(rename = "W")]
    pub hits: Vec<bool>,
    pub subset_fits: Vec<crate::ad::SubsetEstimate>,
}

impl AdDebug {
    pub fn new(plan: PlanRecord, count: &IndicatorCount) -> Self {
        Self {
            plan,
            count: count.count,
            hits: count.hits.clone(),
            subset_fits: count.estimates.clone(),
        }
    }
}

/// Custodian-only diagnostics for an AM run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmDebug {
    pub plan: PlanRecord,
    pub nu_bar: f64,
    pub nu_per_subset: Vec<f64>,
    pub intervals: Vec<(ConfidenceInterval, ConfidenceInterval)>,
}

impl AmDebug {
    pub fn new(plan: PlanRecord, overlap: &OverlapResult) -> Self {
        Self {
            plan,
            nu_bar: overlap.nu_bar,
            nu_per_subset: overlap.nus.clone(),
            intervals: overlap.intervals.clone(),
        }
    }
}

/// Pretty JSON written to a sibling temp file and renamed into place, so a
/// reader never sees a half-written report.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Grid as CSV: `corner` then the column axis on the header row, then one
/// row per row-axis value.
pub fn write_grid_csv<W: Write>(
    writer: W,
    corner: &str,
    column_axis: &[String],
    row_axis: &[String],
    values: &[Vec<f64>],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let fail = |e: csv::Error| Error::Format(format!("writing grid: {e}"));
    w.write_record(std::iter::once(corner.to_owned()).chain(column_axis.iter().cloned()))
        .map_err(fail)?;
    for (label, row) in row_axis.iter().zip(values) {
        w.write_record(std::iter::once(label.clone()).chain(row.iter().map(f64::to_string)))
            .map_err(fail)?;
    }
    w.flush()
        .map_err(|e| Error::Format(format!("writing grid: {e}")))
}

pub fn robustness_csv<W: Write>(writer: W, grid: &crate::ad::RobustnessGrid) -> Result<()> {
    write_grid_csv(
        writer,
        "gamma\\M",
        &grid.m_axis.iter().map(usize::to_string).collect::<Vec<_>>(),
        &grid
            .gamma_axis
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>(),
        &grid.t,
    )
}

pub fn contour_csv<W: Write>(writer: W, grid: &crate::am::ContourGrid) -> Result<()> {
    write_grid_csv(
        writer,
        "diff\\ratio",
        &grid
            .ratio_axis
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>(),
        &grid
            .diff_axis
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>(),
        &grid.values,
    )
}
