//! Sample summaries shared by the posterior reports.

use serde::{Deserialize, Serialize};

/// Linear-interpolation quantile of an ascending slice (R's type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn quantile(sample: &[f64], p: f64) -> f64 {
    quantile_sorted(&sorted(sample), p)
}

pub fn sorted(sample: &[f64]) -> Vec<f64> {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn mean(sample: &[f64]) -> f64 {
    sample.iter().sum::<f64>() / sample.len() as f64
}

pub fn sd(sample: &[f64]) -> f64 {
    let m = mean(sample);
    (sample.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (sample.len() as f64 - 1.0)).sqrt()
}

/// Probabilities reported for every posterior sample.
pub const REPORT_PROBS: [f64; 7] = [0.025, 0.05, 0.1, 0.5, 0.9, 0.95, 0.975];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    /// `(p, quantile)` pairs.
    pub quantiles: Vec<(f64, f64)>,
}

impl SampleSummary {
    pub fn of(sample: &[f64]) -> Self {
        let s = sorted(sample);
        Self {
            n: s.len(),
            mean: mean(&s),
            sd: if s.len() > 1 { sd(&s) } else { 0.0 },
            median: quantile_sorted(&s, 0.5),
            quantiles: REPORT_PROBS
                .iter()
                .map(|&p| (p, quantile_sorted(&s, p)))
                .collect(),
        }
    }
}
