//! Deterministic linear-regression engine: ingestion, design matrices, OLS
//! fits and equal-tailed intervals.

pub mod dataset;
pub mod dist;
pub mod formula;
pub mod ols;

pub use dataset::{encode_categoricals, CategoricalGroup, ColumnKind, Dataset, Schema};
pub use dist::{normal_cdf, normal_quantile, t_quantile, Z_975};
pub use formula::{parse_formula, Factor, ModelSpec, Term, Transform, INTERCEPT_LABEL};
pub use ols::{
    design_matrix, fit_design, fit_ols, ConfidenceInterval, DegeneratePolicy, DesignMatrix,
    FitResult,
};
