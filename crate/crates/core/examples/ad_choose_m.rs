//! Choosing M for the alternative-data check without spending budget.
//!
//! Geometry of the schooling application: published estimate -26 with
//! standard error 97, confidential N = 160 364, one-sided region [500, inf).
//! T is 0 where the simulated r_obs band straddles 0.5 and grows as the truth
//! moves away from the boundary.

use dprep::ad::{build_fixed_region, robustness_contour, ContourInputs};
use dprep::dp::PrivacyParams;

fn main() -> dprep::Result<()> {
    let region = build_fixed_region(500.0, f64::INFINITY)?;
    let inputs = ContourInputs {
        sigma_hat_o: 97.0,
        n0: 154_442,
        n_total: 160_364,
        epsilon: PrivacyParams::new(1.0)?,
        replications: 750,
        seed: 2021,
    };
    let gammas: Vec<f64> = (0..7).map(|i| 500.0 + 150.0 * i as f64).collect();
    let ms = [5, 10, 20, 30, 50, 90];
    let grid = robustness_contour(&gammas, &ms, &region, &inputs)?;

    print!("{:>8}", "gamma\\M");
    ms.iter().for_each(|m| print!("{m:>7}"));
    println!();
    for (g, row) in grid.gamma_axis.iter().zip(&grid.t) {
        print!("{g:>8.0}");
        row.iter().for_each(|t| print!("{t:>7.3}"));
        println!();
    }
    Ok(())
}
