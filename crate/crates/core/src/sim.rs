//! Synthetic regression data for simulations, examples and tests.
//!
//! `X1 ~ U[0, 10]`, `X2 ~ N(5 + c·X3, 1)`, `X3 ~ Bernoulli(0.5)` and
//! `Y ~ N(b0 + b1·X1 + b2·X2 + b3·X3, sd²)`. With the defaults (c = 0,
//! b = (0, 2, 1, 3), sd = 3) this is the original-study design; setting
//! `b2 = 0.9` gives the replication design.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dp::RngStream;
use crate::error::{Error, Result};
use crate::model::Dataset;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimDesign {
    pub intercept: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub noise_sd: f64,
    /// Shift of X2's mean when X3 = 1; nonzero values make X2 and X3
    /// correlated, so dropping X3 biases the X2 coefficient.
    pub x2_shift: f64,
}

impl Default for SimDesign {
    fn default() -> Self {
        Self {
            intercept: 0.0,
            b1: 2.0,
            b2: 1.0,
            b3: 3.0,
            noise_sd: 3.0,
            x2_shift: 0.0,
        }
    }
}

impl SimDesign {
    pub fn replication() -> Self {
        Self {
            b2: 0.9,
            ..Self::default()
        }
    }

    /// `n` rows with columns `y, x1, x2, x3`.
    pub fn generate(&self, n: usize, stream: &mut RngStream) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::arg("cannot generate an empty dataset"));
        }
        let noise = Normal::new(0.0, self.noise_sd).map_err(|e| Error::arg(e.to_string()))?;
        let unit = Normal::new(0.0, 1.0).expect("standard normal");
        let (mut y, mut x1, mut x2, mut x3) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for _ in 0..n {
            let a = stream.random_range(0.0..10.0);
            let c = if stream.random_bool(0.5) { 1.0 } else { 0.0 };
            let b = 5.0 + self.x2_shift * c + unit.sample(stream);
            x1.push(a);
            x2.push(b);
            x3.push(c);
            y.push(self.intercept + self.b1 * a + self.b2 * b + self.b3 * c + noise.sample(stream));
        }
        Dataset::from_columns([("y", y), ("x1", x1), ("x2", x2), ("x3", x3)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fit_ols, parse_formula};

    #[test]
    fn recovers_coefficients() {
        let mut s = RngStream::root(1);
        let d = SimDesign::replication().generate(20_000, &mut s).unwrap();
        let fit = fit_ols(&d, &parse_formula("y ~ x1 + x2 + x3").unwrap()).unwrap();
        assert!((fit.coefficient("x1").unwrap() - 2.0).abs() < 0.05);
        assert!((fit.coefficient("x2").unwrap() - 0.9).abs() < 0.1);
        assert!((fit.coefficient("x3").unwrap() - 3.0).abs() < 0.15);
        assert!((fit.sigma2_hat - 9.0).abs() < 0.3);
    }

    #[test]
    fn original_study_scale() {
        // σ̂ of the X2 coefficient at n₀ = 10⁴ is about 3/√10⁴
        let mut s = RngStream::root(2);
        let d = SimDesign::default().generate(10_000, &mut s).unwrap();
        let fit = fit_ols(&d, &parse_formula("y ~ x1 + x2 + x3").unwrap()).unwrap();
        assert!((fit.stderr("x2").unwrap() - 0.03).abs() < 0.003);
    }

    #[test]
    fn csv_roundtrip() {
        let mut s = RngStream::root(3);
        let d = SimDesign::default().generate(25, &mut s).unwrap();
        let mut buf = Vec::new();
        d.write_delimited(&mut buf, b',').unwrap();
        let back = Dataset::read_delimited(&buf[..], &crate::model::Schema::new(), b',').unwrap();
        assert_eq!(back, d);
    }
}
