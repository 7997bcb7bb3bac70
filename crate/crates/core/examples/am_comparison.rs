//! Alternative-model comparison: does adding X3 change the X2 coefficient?
//!
//! X2 and X3 are made correlated, so dropping X3 biases the X2 estimate and
//! the two models' intervals drift apart.

use dprep::am::{
    average_overlap, credible_interval, invert_credible_interval, null_assumption_lengths,
    posterior_nu, release_overlap, AMConfig,
};
use dprep::dp::{BudgetLedger, PrivacyParams, RngStream};
use dprep::model::parse_formula;
use dprep::partition::make_partition;
use dprep::sim::SimDesign;

fn main() -> dprep::Result<()> {
    let design = SimDesign {
        x2_shift: 0.5,
        ..SimDesign::replication()
    };
    let data = design.generate(40_000, &mut RngStream::root(2022).derive("data", 0))?;
    let m0 = parse_formula("y ~ x1 + x2")?;
    let m1 = parse_formula("y ~ x1 + x2 + x3")?;

    let config = AMConfig {
        seed: 11,
        ..AMConfig::new(25, PrivacyParams::new(1.0)?)
    };
    let plan = make_partition(data.n_rows(), config.subsets, config.seed)?;

    let overlap = average_overlap(&data, &m0, &m1, "x2", &plan, config.level)?;
    let mut ledger = BudgetLedger::new(Some(2.0))?;
    let released = release_overlap(
        &overlap,
        &config,
        &mut ledger,
        &mut RngStream::root(99).derive("noise", 0),
    )?;
    let post = posterior_nu(&released, &config)?;
    let ci = credible_interval(&post, 0.9)?;
    println!("released average overlap {:.3}", released.nu_bar_noisy);
    println!(
        "posterior mean {:.3}, 90% credible interval [{:.3}, {:.3}]",
        post.mean(),
        ci.lower,
        ci.upper
    );

    // a published standard error of 0.03 at n0 = 10 000
    let n = data.n_rows() / config.subsets;
    let asm = null_assumption_lengths(0.03, 10_000, n, config.level)?;
    let diff = invert_credible_interval(&ci, &asm)?;
    println!(
        "|beta - gamma| in [{:.3}, {:.3}] (interval length {:.3})",
        diff.lower, diff.upper, asm.l1
    );
    Ok(())
}
