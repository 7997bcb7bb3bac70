use serde::{Deserialize, Serialize};

use crate::am::{AMConfig, AMReleased};
use crate::dp::{release_scalar_for, BudgetLedger, RngStream};
use crate::error::{Error, Result};
use crate::model::{fit_ols, ConfidenceInterval, Dataset, DegeneratePolicy, ModelSpec, Term};
use crate::partition::{subset_view, PartitionPlan};

/// ν = ½[(U − L)/|I₁| + (U − L)/|I₂|] where [L, U] = I₁ ∩ I₂. Disjoint
/// intervals (or ones that touch in a single point) give 0.
pub fn overlap_measure(i1: &ConfidenceInterval, i2: &ConfidenceInterval) -> Result<f64> {
    let (l1, l2) = (i1.length(), i2.length());
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::DegenerateInterval(format!(
            "overlap needs intervals of positive length, got {l1} and {l2}"
        )));
    }
    let common = intersection_length(i1, i2);
    Ok(0.5 * (common / l1 + common / l2))
}

fn intersection_length(i1: &ConfidenceInterval, i2: &ConfidenceInterval) -> f64 {
    (i1.upper.min(i2.upper) - i1.lower.max(i2.lower)).max(0.0)
}

// Zero-length intervals allowed under the point-interval policy: a point's
// share of the overlap is 1 if it lies in the other interval, else 0 (the
// limit of c/len as len shrinks).
fn overlap_with_points(i1: &ConfidenceInterval, i2: &ConfidenceInterval) -> f64 {
    let share = |a: &ConfidenceInterval, b: &ConfidenceInterval| {
        if a.length() > 0.0 {
            intersection_length(a, b) / a.length()
        } else if b.contains(a.lower) {
            1.0
        } else {
            0.0
        }
    };
    0.5 * (share(i1, i2) + share(i2, i1))
}

/// Per-subset overlaps. Custodian-only except through [`release_overlap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult {
    pub nus: Vec<f64>,
    pub nu_bar: f64,
    pub intervals: Vec<(ConfidenceInterval, ConfidenceInterval)>,
}

/// Fit both models on every subset, build equal-tailed t intervals for `coef`
/// at `level` and average their overlaps.
pub fn average_overlap(
    data: &Dataset,
    m0: &ModelSpec,
    m1: &ModelSpec,
    coef: &str,
    plan: &PartitionPlan,
    level: f64,
) -> Result<OverlapResult> {
    average_overlap_with(data, m0, m1, coef, plan, level, DegeneratePolicy::Error)
}

pub fn average_overlap_with(
    data: &Dataset,
    m0: &ModelSpec,
    m1: &ModelSpec,
    coef: &str,
    plan: &PartitionPlan,
    level: f64,
    policy: DegeneratePolicy,
) -> Result<OverlapResult> {
    if plan.n_rows() != data.n_rows() {
        return Err(Error::arg(format!(
            "partition plan covers {} rows but the dataset has {}",
            plan.n_rows(),
            data.n_rows()
        )));
    }
    let plain = Term::column(coef);
    for (name, spec) in [("m0", m0), ("m1", m1)] {
        spec.validate(data)?;
        if !spec.terms.contains(&plain) {
            return Err(Error::Model(format!(
                "model {name} must include `{coef}` as an untransformed term"
            )));
        }
    }
    let mut nus = Vec::with_capacity(plan.subsets());
    let mut intervals = Vec::with_capacity(plan.subsets());
    for l in 0..plan.subsets() {
        let view = subset_view(data, plan, l)?;
        let interval = |spec: &ModelSpec, name: &str| -> Result<ConfidenceInterval> {
            let fit = fit_ols(&view, spec).map_err(|e| e.in_subset(l, Some(name)))?;
            fit.confidence_interval_with(fit.position(coef)?, level, policy)
                .map_err(|e| e.in_subset(l, Some(name)))
        };
        let (a, b) = (interval(m0, "m0")?, interval(m1, "m1")?);
        let nu = match policy {
            DegeneratePolicy::Error => overlap_measure(&a, &b)?,
            DegeneratePolicy::PointInterval => overlap_with_points(&a, &b),
        };
        nus.push(nu);
        intervals.push((a, b));
    }
    let nu_bar = nus.iter().sum::<f64>() / nus.len() as f64;
    Ok(OverlapResult {
        nus,
        nu_bar,
        intervals,
    })
}

/// Release ν̄ with sensitivity 1/M. The value is not clamped to [0, 1].
pub fn release_overlap(
    overlap: &OverlapResult,
    config: &AMConfig,
    ledger: &mut BudgetLedger,
    stream: &mut RngStream,
) -> Result<AMReleased> {
    config.validate()?;
    if overlap.nus.len() != config.subsets {
        return Err(Error::arg(format!(
            "overlap has {} subsets but M = {}",
            overlap.nus.len(),
            config.subsets
        )));
    }
    let sensitivity = 1.0 / config.subsets as f64;
    let release = release_scalar_for(
        overlap.nu_bar,
        sensitivity,
        config.epsilon,
        ledger,
        stream,
        "am-overlap",
    )?;
    Ok(AMReleased {
        nu_bar_noisy: release.value,
        subsets: config.subsets,
        epsilon: release.epsilon,
        ledger_entry: ledger.entries().len() - 1,
        timestamp: release.timestamp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(lo: f64, hi: f64) -> ConfidenceInterval {
        ConfidenceInterval::new(lo, hi, 0.95).unwrap()
    }

    #[test]
    fn worked_cases() {
        assert_eq!(overlap_measure(&ci(1.0, 3.0), &ci(1.0, 3.0)).unwrap(), 1.0);
        assert_eq!(overlap_measure(&ci(0.0, 1.0), &ci(2.0, 3.0)).unwrap(), 0.0);
        assert_eq!(overlap_measure(&ci(0.0, 1.0), &ci(1.0, 3.0)).unwrap(), 0.0);
        assert_eq!(overlap_measure(&ci(0.0, 2.0), &ci(1.0, 3.0)).unwrap(), 0.5);
        assert_eq!(
            overlap_measure(&ci(0.0, 4.0), &ci(1.0, 2.0)).unwrap(),
            0.625
        );
    }

    #[test]
    fn zero_length_is_degenerate() {
        let err = overlap_measure(&ci(1.0, 1.0), &ci(0.0, 2.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateInterval(_)));
        assert_eq!(overlap_with_points(&ci(1.0, 1.0), &ci(0.0, 2.0)), 0.5);
        assert_eq!(overlap_with_points(&ci(1.0, 1.0), &ci(1.0, 1.0)), 1.0);
        assert_eq!(overlap_with_points(&ci(5.0, 5.0), &ci(0.0, 2.0)), 0.0);
    }

    #[test]
    fn identical_models_overlap_fully() {
        let x: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| 1.0 + 2.0 * v + (i as f64 * 1.3).cos())
            .collect();
        let d = Dataset::from_columns([("x", x), ("y", y)]).unwrap();
        let spec = ModelSpec::new("y", vec![Term::column("x")]).unwrap();
        let plan = crate::partition::make_partition(40, 4, 1).unwrap();
        let o = average_overlap(&d, &spec, &spec, "x", &plan, 0.95).unwrap();
        assert_eq!(o.nus, vec![1.0; 4]);
        assert_eq!(o.nu_bar, 1.0);
    }

    #[test]
    fn transformed_coefficient_rejected() {
        let d = Dataset::from_columns([
            ("x", vec![1.0, 2.0, 3.0, 4.0]),
            ("y", vec![1.0, 3.0, 2.0, 5.0]),
        ])
        .unwrap();
        let m0 = ModelSpec::new(
            "y",
            vec![Term::with_transform("x", crate::model::Transform::Log)],
        )
        .unwrap();
        let m1 = ModelSpec::new("y", vec![Term::column("x")]).unwrap();
        let plan = crate::partition::make_partition(4, 1, 1).unwrap();
        assert!(average_overlap(&d, &m0, &m1, "x", &plan, 0.95).is_err());
    }
}
