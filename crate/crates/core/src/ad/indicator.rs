use serde::{Deserialize, Serialize};

use crate::ad::region::ToleranceRegion;
use crate::ad::ADConfig;
use crate::dp::{release_scalar_for, BudgetLedger, RngStream};
use crate::error::{Error, Result};
use crate::model::{fit_ols, Dataset, ModelSpec};
use crate::partition::{subset_view, PartitionPlan};

/// One subset's estimate of the coefficient of interest. Custodian-only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetEstimate {
    pub subset: usize,
    pub rows: usize,
    pub estimate: f64,
    pub stderr: f64,
}

/// Per-subset hits and their total. Custodian-only: nothing here may leave
/// the custodian except through [`release_count`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorCount {
    pub hits: Vec<bool>,
    pub count: usize,
    pub estimates: Vec<SubsetEstimate>,
}

/// Fit `spec` on every subset of `plan` and count the subsets whose estimate
/// of `coef` lies in `region`. A failed subset fit aborts the whole count.
pub fn compute_indicator_count(
    data: &Dataset,
    spec: &ModelSpec,
    coef: &str,
    region: &ToleranceRegion,
    plan: &PartitionPlan,
) -> Result<IndicatorCount> {
    if plan.n_rows() != data.n_rows() {
        return Err(Error::arg(format!(
            "partition plan covers {} rows but the dataset has {}",
            plan.n_rows(),
            data.n_rows()
        )));
    }
    spec.validate(data)?;
    if !spec.labels().iter().any(|l| l == coef) {
        return Err(Error::Model(format!("model has no coefficient `{coef}`")));
    }
    let mut estimates = Vec::with_capacity(plan.subsets());
    for l in 0..plan.subsets() {
        let view = subset_view(data, plan, l)?;
        let fit = fit_ols(&view, spec).map_err(|e| e.in_subset(l, None))?;
        estimates.push(SubsetEstimate {
            subset: l,
            rows: view.n_rows(),
            estimate: fit.coefficient(coef)?,
            stderr: fit.stderr(coef)?,
        });
    }
    let hits: Vec<bool> = estimates
        .iter()
        .map(|e| region.contains(e.estimate))
        .collect();
    let count = hits.iter().filter(|&&w| w).count();
    Ok(IndicatorCount {
        hits,
        count,
        estimates,
    })
}

/// The noisy count `S + Laplace(0, 1/ε)` and the settings it was drawn under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ADReleased {
    pub s_noisy: f64,
    pub subsets: usize,
    pub epsilon: f64,
    pub ledger_entry: usize,
    pub timestamp: String,
}

/// Release the hit count with sensitivity 1.
pub fn release_count(
    count: usize,
    config: &ADConfig,
    ledger: &mut BudgetLedger,
    stream: &mut RngStream,
) -> Result<ADReleased> {
    config.validate()?;
    if count > config.subsets {
        return Err(Error::arg(format!(
            "count {count} exceeds M = {}",
            config.subsets
        )));
    }
    let release = release_scalar_for(
        count as f64,
        1.0,
        config.epsilon,
        ledger,
        stream,
        "ad-count",
    )?;
    Ok(ADReleased {
        s_noisy: release.value,
        subsets: config.subsets,
        epsilon: release.epsilon,
        ledger_entry: ledger.entries().len() - 1,
        timestamp: release.timestamp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ad::region::build_fixed_region;
    use crate::model::Term;
    use crate::partition::make_partition;

    const SLOPES: [f64; 3] = [1.0, -2.0, 0.5];
    const WIGGLE: [f64; 4] = [0.1, -0.2, 0.15, -0.05];

    // y follows a different slope in each subset of the plan, so the hand
    // answer is known: slopes +1, -2, +0.5 up to a small deterministic wiggle.
    fn data_for(plan: &PartitionPlan) -> Dataset {
        let mut seen = [0usize; 3];
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for &l in plan.assignment() {
            let xi = seen[l] as f64;
            x.push(xi);
            y.push(1.0 + SLOPES[l] * xi + WIGGLE[seen[l]]);
            seen[l] += 1;
        }
        Dataset::from_columns([("x", x), ("y", y)]).unwrap()
    }

    fn plan() -> PartitionPlan {
        make_partition(12, 3, 17).unwrap()
    }

    #[test]
    fn counts_positive_slopes() {
        let spec = ModelSpec::new("y", vec![Term::column("x")]).unwrap();
        let region = build_fixed_region(0.0, f64::INFINITY).unwrap();
        let plan = plan();
        let c = compute_indicator_count(&data_for(&plan), &spec, "x", &region, &plan).unwrap();
        assert_eq!(c.hits, vec![true, false, true]);
        assert_eq!(c.count, 2);
        // Sxy/Sxx by hand: wiggle contributes (-1.5*0.1 - 0.5*-0.2 + 0.5*0.15 + 1.5*-0.05)/5
        let bump = (-0.15 + 0.1 + 0.075 - 0.075) / 5.0;
        assert!((c.estimates[0].estimate - (1.0 + bump)).abs() < 1e-12);
        assert!((c.estimates[1].estimate - (-2.0 + bump)).abs() < 1e-12);
    }

    #[test]
    fn full_cover_counts_everything() {
        let spec = ModelSpec::new("y", vec![Term::column("x")]).unwrap();
        let region = build_fixed_region(f64::NEG_INFINITY, f64::INFINITY).unwrap();
        let plan = plan();
        let c = compute_indicator_count(&data_for(&plan), &spec, "x", &region, &plan).unwrap();
        assert_eq!(c.count, 3);
    }

    #[test]
    fn singular_subset_names_index() {
        let plan = plan();
        let mut d = data_for(&plan);
        for i in plan.rows_of(1) {
            d.set_row(i, &[1.0, i as f64]).unwrap();
        }
        let spec = ModelSpec::new("y", vec![Term::column("x")]).unwrap();
        let region = build_fixed_region(0.0, 1.0).unwrap();
        let err = compute_indicator_count(&d, &spec, "x", &region, &plan).unwrap_err();
        assert!(
            matches!(
                err,
                Error::SingularFit {
                    subset: Some(1),
                    ..
                }
            ),
            "{err}"
        );
    }
}
