use proptest::prelude::*;

use dprep::ad::{draw_r, gibbs_posterior_with, theta_hat, ADConfig, ADReleased};
use dprep::am::{average_overlap, invert_overlap, overlap_measure, InversionAssumption};
use dprep::dp::{release_scalar, BudgetLedger, PrivacyParams, RngStream};
use dprep::model::{design_matrix, fit_ols, parse_formula, ConfidenceInterval, Dataset};
use dprep::partition::make_partition;
use dprep::prior::BetaPrior;
use dprep::sim::SimDesign;
use dprep::summary::{quantile, sd};
use dprep::Error;

#[test]
fn each_row_lands_in_each_block_equally_often() {
    let seeds = 10_000;
    let mut hits = [[0u32; 4]; 100];
    for seed in 0..seeds {
        let plan = make_partition(100, 4, seed).unwrap();
        for (row, &block) in plan.assignment().iter().enumerate() {
            hits[row][block] += 1;
        }
    }
    for row in hits {
        for count in row {
            let frac = f64::from(count) / seeds as f64;
            assert!((frac - 0.25).abs() < 0.02, "{frac}");
        }
    }
}

proptest! {
    #[test]
    fn partition_covers_every_row_once(n in 1usize..400, m in 1usize..50, seed: u64) {
        prop_assume!(m <= n);
        let plan = make_partition(n, m, seed).unwrap();
        let sizes = plan.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let mut seen: Vec<usize> = (0..m).flat_map(|l| plan.rows_of(l)).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn residuals_are_orthogonal_to_the_design(seed: u64, n in 8usize..120) {
        let data = SimDesign::default().generate(n, &mut RngStream::root(seed)).unwrap();
        let spec = parse_formula("y ~ x1 + x2 + x3").unwrap();
        let fit = match fit_ols(&data, &spec) {
            Ok(f) => f,
            Err(Error::SingularFit { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let x = design_matrix(&data, &spec).unwrap();
        let y = data.column("y").unwrap();
        let resid: Vec<f64> = x.mul(&fit.coefficients).iter().zip(y).map(|(f, y)| y - f).collect();
        for (j, dot) in x.t_mul(&resid).into_iter().enumerate() {
            let scale: f64 = x.column(j).iter().map(|v| v.abs()).sum::<f64>() * resid.iter().map(|r| r.abs()).fold(0.0, f64::max);
            prop_assert!(dot.abs() <= 1e-9 * scale.max(1.0), "column {} dot {}", j, dot);
        }
    }

    #[test]
    fn fit_ignores_row_order(seed: u64, shift in 1usize..50) {
        let data = SimDesign::default().generate(60, &mut RngStream::root(seed)).unwrap();
        let order: Vec<usize> = (0..60).map(|i| (i + shift) % 60).rev().collect();
        let shuffled = data.select_rows(&order).unwrap();
        let spec = parse_formula("y ~ x1 + x2 + x3").unwrap();
        let (a, b) = (fit_ols(&data, &spec).unwrap(), fit_ols(&shuffled, &spec).unwrap());
        for (u, v) in a.coefficients.iter().zip(&b.coefficients).chain(a.stderrs.iter().zip(&b.stderrs)) {
            prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
        }
    }

    #[test]
    fn ledger_spend_is_the_sum(eps in prop::collection::vec(0.01f64..0.5, 1..12)) {
        let cap = 2.0;
        let mut ledger = BudgetLedger::new(Some(cap)).unwrap();
        let mut stream = RngStream::root(1);
        let mut expected = 0.0;
        for e in eps {
            let res = release_scalar(0.0, 1.0, PrivacyParams::new(e).unwrap(), &mut ledger, &mut stream);
            if expected + e <= cap + 1e-12 {
                prop_assert!(res.is_ok());
                expected += e;
            } else {
                let refused = matches!(res, Err(Error::BudgetRefused { .. }));
                prop_assert!(refused);
            }
            prop_assert!((ledger.spent() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_hat_is_nonincreasing_in_delta(seed: u64, s in 0u32..=20) {
        let mut stream = RngStream::root(seed);
        let samples: Vec<f64> = (0..200).map(|_| draw_r(s, 20, BetaPrior::FLAT, &mut stream)).collect();
        let thetas: Vec<f64> = (1..20).map(|k| theta_hat(&samples, f64::from(k) / 20.0)).collect();
        prop_assert!(thetas.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn overlap_falls_as_intervals_separate(a in -5.0f64..5.0, la in 0.1f64..4.0, lb in 0.1f64..4.0, steps in prop::collection::vec(0.0f64..0.5, 1..20)) {
        let fixed = ConfidenceInterval::new(a, a + la, 0.95).unwrap();
        let mut start = a;
        let mut last = f64::INFINITY;
        for step in steps {
            start += step;
            let moving = ConfidenceInterval::new(start, start + lb, 0.95).unwrap();
            let nu = overlap_measure(&fixed, &moving).unwrap();
            prop_assert!((0.0..=1.0).contains(&nu));
            prop_assert!(nu <= last + 1e-12);
            last = nu;
        }
    }

    #[test]
    fn inversion_recovers_the_centre_distance(l1 in 0.5f64..5.0, l2 in 0.5f64..5.0, t in 0.0f64..1.0) {
        let asm = InversionAssumption::new(l1, l2).unwrap();
        // distances where the intervals overlap but neither contains the other
        let (lo, hi) = (0.5 * (asm.l1 - asm.l2), 0.5 * (asm.l1 + asm.l2));
        let d = lo + t * (hi - lo);
        prop_assume!(d > lo + 1e-9 && d < hi - 1e-9);
        let wide = ConfidenceInterval::normal(0.0, asm.l1 / 2.0 / 1.959_963_984_540_054, 0.95).unwrap();
        let narrow = ConfidenceInterval::new(d - asm.l2 / 2.0, d + asm.l2 / 2.0, 0.95).unwrap();
        let nu = overlap_measure(&wide, &narrow).unwrap();
        let back = invert_overlap(nu, &asm).unwrap();
        prop_assert!((back - d).abs() < 1e-9 * hi.max(1.0), "{} vs {}", back, d);
    }
}

fn released(s_noisy: f64, subsets: usize, epsilon: f64) -> ADReleased {
    ADReleased {
        s_noisy,
        subsets,
        epsilon,
        ledger_entry: 0,
        timestamp: String::new(),
    }
}

#[test]
fn posterior_narrows_with_more_subsets() {
    let eps = PrivacyParams::new(1.0).unwrap();
    let root = RngStream::root(21);
    let mut narrower = 0;
    for run in 0..50 {
        let r = root.derive("run", run);
        let spread = |m: usize| {
            let mut noise = r.derive("noise", m as u64);
            let mut ledger = BudgetLedger::new(None).unwrap();
            let s = (0.7 * m as f64).round();
            let noisy = release_scalar(s, 1.0, eps, &mut ledger, &mut noise)
                .unwrap()
                .value;
            let config = ADConfig {
                seed: run,
                ..ADConfig::new(m, eps)
            };
            let post = gibbs_posterior_with(
                &released(noisy, m, 1.0),
                &config,
                &mut r.derive("gibbs", m as u64),
            )
            .unwrap();
            sd(&post.r_samples)
        };
        if spread(90) < spread(10) {
            narrower += 1;
        }
    }
    assert!(narrower >= 48, "{narrower}/50");
}

#[test]
fn omitted_variable_bias_shows_up_at_larger_n() {
    let design = SimDesign {
        x2_shift: 1.0,
        ..SimDesign::replication()
    };
    let full = parse_formula("y ~ x1 + x2 + x3").unwrap();
    let short = parse_formula("y ~ x1 + x2").unwrap();
    let mean_nu = |n: usize| {
        let total: f64 = (0..20)
            .map(|seed| {
                let data: Dataset = design
                    .generate(n, &mut RngStream::root(seed).derive("n", n as u64))
                    .unwrap();
                let plan = make_partition(n, 1, seed).unwrap();
                average_overlap(&data, &full, &short, "x2", &plan, 0.95)
                    .unwrap()
                    .nu_bar
            })
            .sum();
        total / 20.0
    };
    let (small, large) = (mean_nu(250), mean_nu(4_000));
    assert!(large < small, "n=250 {small}, n=4000 {large}");
}

#[test]
fn release_median_sits_on_the_true_value() {
    let eps = PrivacyParams::new(0.5).unwrap();
    let mut stream = RngStream::root(4);
    let mut ledger = BudgetLedger::new(None).unwrap();
    let values: Vec<f64> = (0..200_000)
        .map(|_| {
            release_scalar(3.0, 1.0, eps, &mut ledger, &mut stream)
                .unwrap()
                .value
        })
        .collect();
    assert!((quantile(&values, 0.5) - 3.0).abs() < 0.02);
}
