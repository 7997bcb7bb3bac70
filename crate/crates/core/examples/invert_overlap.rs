//! Turning a credible interval for the average overlap into a range for
//! |beta - gamma|, with the schooling application's numbers: published
//! standard error 177 at n0 = 160 364, M = 25, posterior 90% interval
//! [0.878, 0.998].

use dprep::am::{
    credible_interval, grid_posterior, invert_credible_interval, null_assumption_lengths,
};
use dprep::model::ConfidenceInterval;
use dprep::prior::BetaPrior;

fn main() -> dprep::Result<()> {
    // the posterior itself, from the released 1.03
    let post = grid_posterior(1.03, 25, 1.0, BetaPrior::FLAT, 10_001)?;
    let ci = credible_interval(&post, 0.9)?;
    println!(
        "posterior 90% interval from nu^L = 1.03: [{:.3}, {:.3}]",
        ci.lower, ci.upper
    );

    let n0 = 160_364;
    let asm = null_assumption_lengths(177.0, n0, n0 / 25, 0.95)?;
    println!("interval length under the null assumption: {:.1}", asm.l1);

    let stated = ConfidenceInterval::new(0.878, 0.998, 0.9)?;
    let diff = invert_credible_interval(&stated, &asm)?;
    println!("|beta - gamma| in [{:.1}, {:.1}]", diff.lower, diff.upper);
    Ok(())
}
