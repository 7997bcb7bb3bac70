//! Quantiles and CDFs used for interval construction.

use statrs::distribution::{Continuous, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile, Φ⁻¹(0.975).
pub const Z_975: f64 = 1.959_963_984_540_054;

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("probability {p} outside (0, 1)")))
    }
}

pub fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    check_prob(p)?;
    Ok(Normal::standard().inverse_cdf(p))
}

const EXPANSION_DF: u64 = 1_000;

/// Quantile of Student's t with `df` degrees of freedom.
pub fn t_quantile(df: u64, p: f64) -> Result<f64> {
    check_prob(p)?;
    if df == 0 {
        return Err(Error::arg(
            "t quantile needs at least one degree of freedom",
        ));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // statrs' incomplete-beta inversion drifts for df beyond ~10^4; past this
    // point the expansion agrees with it to ~1e-12.
    if df > EXPANSION_DF {
        return Ok(t_quantile_expansion(df as f64, normal_quantile(p)?));
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64).map_err(|e| Error::arg(e.to_string()))?;
    // The inversion is only good to ~1e-9; the CDF itself is accurate to
    // round-off, so polish with Newton steps on it.
    let mut q = dist.inverse_cdf(p);
    for _ in 0..3 {
        let density = dist.pdf(q);
        if density <= 0.0 {
            break;
        }
        let step = (dist.cdf(q) - p) / density;
        q -= step;
        if step.abs() <= 1e-15 * q.abs().max(1.0) {
            break;
        }
    }
    Ok(q)
}

// Fisher's expansion of the t quantile in powers of 1/df.
fn t_quantile_expansion(df: f64, z: f64) -> f64 {
    let z2 = z * z;
    let g1 = z * (z2 + 1.0) / 4.0;
    let g2 = z * (5.0 * z2 * z2 + 16.0 * z2 + 3.0) / 96.0;
    let g3 = z * (3.0 * z2.powi(3) + 19.0 * z2 * z2 + 17.0 * z2 - 15.0) / 384.0;
    let g4 = z * (79.0 * z2.powi(4) + 776.0 * z2.powi(3) + 1482.0 * z2 * z2 - 1920.0 * z2 - 945.0)
        / 92160.0;
    z + g1 / df + g2 / df.powi(2) + g3 / df.powi(3) + g4 / df.powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_is_zero() {
        for df in [1, 2, 5, 30, 1_000_000] {
            assert_eq!(t_quantile(df, 0.5).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(t_quantile(5, 0.0).is_err());
        assert!(t_quantile(5, 1.0).is_err());
        assert!(t_quantile(5, f64::NAN).is_err());
        assert!(normal_quantile(1.5).is_err());
    }

    #[test]
    fn known_values() {
        assert!((t_quantile(10, 0.975).unwrap() - 2.228_138_851_986_274).abs() < 1e-9);
        assert!((t_quantile(1, 0.975).unwrap() - 12.706_204_736_174_7).abs() < 1e-8);
        assert!((normal_quantile(0.975).unwrap() - Z_975).abs() < 1e-12);
    }

    #[test]
    fn large_df_approaches_normal() {
        for p in [0.6, 0.9, 0.975, 0.995] {
            let z = normal_quantile(p).unwrap();
            assert!((t_quantile(1_000_000, p).unwrap() - z).abs() < 1e-4);
        }
    }

    // Reference quantiles from scipy.stats.t.ppf at p = 0.55, 0.8, 0.95, 0.975, 0.999.
    const REFERENCE: [(u64, [f64; 5]); 9] = [
        (
            1,
            [
                0.15838444032458646,
                1.3763819204924512,
                6.313751514800932,
                12.706204736432095,
                318.3088389855419,
            ],
        ),
        (
            2,
            [
                0.1421338109037405,
                1.0606601717798223,
                2.919985580355516,
                4.302652729696142,
                22.32712476997542,
            ],
        ),
        (
            5,
            [
                0.13217517523165695,
                0.919543780236326,
                2.0150483733330233,
                2.570581835636314,
                5.8934295313560074,
            ],
        ),
        (
            30,
            [
                0.1267296131320736,
                0.8537672614712978,
                1.6972608865939574,
                2.0422724563012373,
                3.385184866818216,
            ],
        ),
        (
            200,
            [
                0.12582100977943275,
                0.8434221315352971,
                1.652508100910269,
                1.9718962236316089,
                3.1314798142297806,
            ],
        ),
        (
            999,
            [
                0.12569329447058583,
                0.8419811822589467,
                1.646380345427535,
                1.9623414611334487,
                3.0984103617532646,
            ],
        ),
        (
            1000,
            [
                0.12569326251871643,
                0.8419808221624286,
                1.6463788172854639,
                1.9623390808264074,
                3.0984021639128754,
            ],
        ),
        (
            5000,
            [
                0.12566772930724587,
                0.8416931276635047,
                1.6451584375969708,
                1.9604385517065075,
                3.091863119960981,
            ],
        ),
        (
            100000,
            [
                0.12566166596959202,
                0.8416248279969011,
                1.6448688647849692,
                1.9599877075346093,
                3.090313809427237,
            ],
        ),
    ];

    #[test]
    fn matches_reference_table() {
        for (df, qs) in REFERENCE {
            for (p, want) in [0.55, 0.8, 0.95, 0.975, 0.999].into_iter().zip(qs) {
                let got = t_quantile(df, p).unwrap();
                assert!(
                    (got - want).abs() < 1e-10 * want.max(1.0),
                    "df={df} p={p}: {got} vs {want}"
                );
                let lower = t_quantile(df, 1.0 - p).unwrap();
                assert!((lower + want).abs() < 1e-10 * want.max(1.0));
            }
        }
    }

    #[test]
    fn increasing_in_p() {
        for df in [1, 3, 40, 2000] {
            let qs: Vec<f64> = (1..100)
                .map(|i| t_quantile(df, f64::from(i) / 100.0).unwrap())
                .collect();
            assert!(qs.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
