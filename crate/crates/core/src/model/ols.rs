//! Ordinary least squares via the normal equations.
//!
//! Columns are scaled to unit Euclidean norm before the Cholesky
//! factorisation so the rank threshold (`1e-10` times the largest pivot
//! diagonal) is not dominated by covariate units. One step of iterative
//! refinement tightens the residual orthogonality.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::dist::{normal_quantile, t_quantile};
use crate::model::formula::{ModelSpec, Transform, INTERCEPT_LABEL};
use crate::model::Dataset;

const RANK_TOLERANCE: f64 = 1e-10;

/// Dense row-major design matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
    pub labels: Vec<String>,
}

impl DesignMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Xᵀv
    pub fn t_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate().take(self.rows) {
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o += x * vi;
            }
        }
        out
    }

    /// Xb
    pub fn mul(&self, b: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(b).map(|(x, c)| x * c).sum())
            .collect()
    }

    /// XᵀX
    pub fn gram(&self) -> Vec<f64> {
        let p = self.cols;
        let mut g = vec![0.0; p * p];
        for i in 0..self.rows {
            let row = self.row(i);
            for a in 0..p {
                for b in a..p {
                    g[a * p + b] += row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                g[a * p + b] = g[b * p + a];
            }
        }
        g
    }
}

/// Build the design matrix for `spec` over `data`. Column 0 is all ones when
/// the model has an intercept; term columns follow in model order.
pub fn design_matrix(data: &Dataset, spec: &ModelSpec) -> Result<DesignMatrix> {
    spec.validate(data)?;
    let n = data.n_rows();
    let p = spec.n_coefficients();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(p);
    if spec.intercept {
        columns.push(vec![1.0; n]);
    }
    for term in &spec.terms {
        let mut col = vec![1.0; n];
        for factor in &term.factors {
            let source = data
                .column(&factor.column)
                .ok_or_else(|| Error::Model(format!("unknown column `{}`", factor.column)))?;
            if factor.transform == Transform::Log {
                if let Some(row) = source.iter().position(|&v| v <= 0.0) {
                    return Err(Error::Domain(format!(
                        "log of non-positive value {} in column `{}` (row {})",
                        source[row],
                        factor.column,
                        row + 1
                    )));
                }
            }
            for (c, &v) in col.iter_mut().zip(source) {
                *c *= factor.transform.apply(v);
            }
        }
        columns.push(col);
    }
    let mut flat = vec![0.0; n * p];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            flat[i * p + j] = v;
        }
    }
    Ok(DesignMatrix {
        rows: n,
        cols: p,
        data: flat,
        labels: spec.labels(),
    })
}

/// Lower-triangular Cholesky factor of a symmetric matrix, refusing pivots
/// below `RANK_TOLERANCE` times the largest diagonal entry.
fn cholesky(a: &[f64], p: usize) -> Result<Vec<f64>> {
    let max_diag = (0..p).map(|i| a[i * p + i]).fold(0.0_f64, f64::max);
    if !(max_diag > 0.0) {
        return Err(Error::SingularFit {
            subset: None,
            model: None,
        });
    }
    let threshold = RANK_TOLERANCE * max_diag;
    let mut l = vec![0.0; p * p];
    for j in 0..p {
        let mut d = a[j * p + j];
        for k in 0..j {
            d -= l[j * p + k] * l[j * p + k];
        }
        if !(d > threshold) {
            return Err(Error::SingularFit {
                subset: None,
                model: None,
            });
        }
        let djj = d.sqrt();
        l[j * p + j] = djj;
        for i in (j + 1)..p {
            let mut s = a[i * p + j];
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            l[i * p + j] = s / djj;
        }
    }
    Ok(l)
}

fn cholesky_solve(l: &[f64], p: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..p {
        for k in 0..i {
            y[i] -= l[i * p + k] * y[k];
        }
        y[i] /= l[i * p + i];
    }
    for i in (0..p).rev() {
        for k in (i + 1)..p {
            y[i] -= l[k * p + i] * y[k];
        }
        y[i] /= l[i * p + i];
    }
    y
}

/// Output of one OLS fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub residual_df: u64,
    pub sigma2_hat: f64,
    pub n: usize,
    pub coef_index: BTreeMap<String, usize>,
}

/// What to do with an interval whose standard error is exactly zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneratePolicy {
    #[default]
    Error,
    PointInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn new(lower: f64, upper: f64, level: f64) -> Result<Self> {
        if !(lower <= upper) {
            return Err(Error::arg(format!(
                "interval lower {lower} exceeds upper {upper}"
            )));
        }
        Ok(Self {
            lower,
            upper,
            level,
        })
    }

    /// Equal-tailed normal interval `center ± z·sd`.
    pub fn normal(center: f64, sd: f64, level: f64) -> Result<Self> {
        check_level(level)?;
        let half = normal_quantile((1.0 + level) / 2.0)? * sd;
        Self::new(center - half, center + half, level)
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!(
            "confidence level {level} outside (0, 1)"
        )))
    }
}

impl FitResult {
    pub fn position(&self, label: &str) -> Result<usize> {
        self.coef_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Model(format!("no coefficient named `{label}`")))
    }

    pub fn coefficient(&self, label: &str) -> Result<f64> {
        Ok(self.coefficients[self.position(label)?])
    }

    pub fn stderr(&self, label: &str) -> Result<f64> {
        Ok(self.stderrs[self.position(label)?])
    }

    pub fn intercept(&self) -> Option<f64> {
        self.coef_index
            .get(INTERCEPT_LABEL)
            .map(|&i| self.coefficients[i])
    }

    /// Equal-tailed Student-t interval for coefficient `which`.
    pub fn confidence_interval(&self, which: usize, level: f64) -> Result<ConfidenceInterval> {
        self.confidence_interval_with(which, level, DegeneratePolicy::Error)
    }

    pub fn confidence_interval_with(
        &self,
        which: usize,
        level: f64,
        policy: DegeneratePolicy,
    ) -> Result<ConfidenceInterval> {
        check_level(level)?;
        let center = *self
            .coefficients
            .get(which)
            .ok_or_else(|| Error::arg(format!("coefficient index {which} out of range")))?;
        let se = self.stderrs[which];
        if se == 0.0 && policy == DegeneratePolicy::Error {
            return Err(Error::DegenerateInterval(format!(
                "coefficient {which} has zero standard error"
            )));
        }
        let half = t_quantile(self.residual_df, (1.0 + level) / 2.0)? * se;
        ConfidenceInterval::new(center - half, center + half, level)
    }
}

/// Fit `spec` to `data` by least squares.
pub fn fit_ols(data: &Dataset, spec: &ModelSpec) -> Result<FitResult> {
    let x = design_matrix(data, spec)?;
    let y = data
        .column(&spec.response)
        .ok_or_else(|| Error::Model(format!("unknown response `{}`", spec.response)))?;
    fit_design(&x, y)
}

/// Least squares on an explicit design matrix.
pub fn fit_design(x: &DesignMatrix, y: &[f64]) -> Result<FitResult> {
    let (n, p) = (x.rows, x.cols);
    if y.len() != n {
        return Err(Error::arg("response length does not match design rows"));
    }
    if n <= p {
        return Err(Error::InsufficientData {
            rows: n,
            params: p,
            needed: p + 1,
        });
    }
    let gram = x.gram();
    let scale: Vec<f64> = (0..p)
        .map(|j| {
            let d = gram[j * p + j].sqrt();
            if d > 0.0 {
                1.0 / d
            } else {
                0.0
            }
        })
        .collect();
    if scale.contains(&0.0) {
        return Err(Error::SingularFit {
            subset: None,
            model: None,
        });
    }
    let scaled: Vec<f64> = (0..p * p)
        .map(|k| gram[k] * scale[k / p] * scale[k % p])
        .collect();
    let l = cholesky(&scaled, p)?;
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let scaled_rhs: Vec<f64> = rhs.iter().zip(&scale).map(|(r, s)| r * s).collect();
        cholesky_solve(&l, p, &scaled_rhs)
            .into_iter()
            .zip(&scale)
            .map(|(b, s)| b * s)
            .collect()
    };

    let mut beta = solve(&x.t_mul(y));
    let residual =
        |beta: &[f64]| -> Vec<f64> { x.mul(beta).iter().zip(y).map(|(f, yi)| yi - f).collect() };
    let correction = solve(&x.t_mul(&residual(&beta)));
    for (b, c) in beta.iter_mut().zip(correction) {
        *b += c;
    }
    let resid = residual(&beta);
    let rss: f64 = resid.iter().map(|r| r * r).sum();
    let df = n - p;
    let sigma2_hat = rss / df as f64;

    let stderrs = (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            let inv_col = solve(&e);
            (sigma2_hat * inv_col[j]).max(0.0).sqrt()
        })
        .collect();

    Ok(FitResult {
        coefficients: beta,
        stderrs,
        residual_df: df as u64,
        sigma2_hat,
        n,
        coef_index: x
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect(),
    })
}
