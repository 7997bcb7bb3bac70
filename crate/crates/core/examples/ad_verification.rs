//! Alternative-data verification end to end on simulated data.
//!
//! The original study (n0 = 10 000, b2 = 1) publishes its X2 estimate and
//! standard error. The confidential replication data have b2 = 0.9. The
//! region is the published estimate inflated to the subset scale.

use dprep::ad::{
    build_inflated_region, compute_indicator_count, delta_star, gibbs_posterior, release_count,
    suggested_delta, ADConfig,
};
use dprep::dp::{BudgetLedger, PrivacyParams, RngStream};
use dprep::model::{fit_ols, parse_formula};
use dprep::partition::make_partition;
use dprep::sim::SimDesign;

fn main() -> dprep::Result<()> {
    let spec = parse_formula("y ~ x1 + x2 + x3")?;
    let root = RngStream::root(2021);

    let original = SimDesign::default().generate(10_000, &mut root.derive("original", 0))?;
    let published = fit_ols(&original, &spec)?;
    let (g, s) = (published.coefficient("x2")?, published.stderr("x2")?);
    println!("published: gamma_hat = {g:.3}, se = {s:.3}");

    let confidential =
        SimDesign::replication().generate(50_000, &mut root.derive("replication", 0))?;
    let m = 25;
    let n = confidential.n_rows() / m;
    let region = build_inflated_region(g, s, 1.96, 10_000, n)?;
    println!(
        "region {region} at subset size {n}, delta* = {:.3}",
        delta_star(g, s, 1.96, 10_000, n)?
    );

    let config = ADConfig {
        delta: suggested_delta(g, s, 1.96, 10_000, n)?,
        seed: 7,
        ..ADConfig::new(m, PrivacyParams::new(1.0)?)
    };
    let plan = make_partition(confidential.n_rows(), m, config.seed)?;

    // custodian side
    let count = compute_indicator_count(&confidential, &spec, "x2", &region, &plan)?;
    let mut ledger = BudgetLedger::new(Some(1.0))?;
    let released = release_count(
        count.count,
        &config,
        &mut ledger,
        &mut root.derive("noise", 0),
    )?;

    // everything below is post-processing of the noisy count
    let post = gibbs_posterior(&released, &config)?;
    let summary = post.summary();
    println!("S^R = {:.2}", released.s_noisy);
    println!(
        "posterior r: median {:.3}, 90% [{:.3}, {:.3}]",
        summary.median,
        dprep::summary::quantile(&post.r_samples, 0.05),
        dprep::summary::quantile(&post.r_samples, 0.95)
    );
    println!(
        "theta_hat = Pr(r >= {:.3}) = {:.3}",
        config.delta, post.theta_hat
    );
    Ok(())
}
