//! Reference contour for reading an average overlap: mean overlap of normal
//! 95% intervals over relative difference and standard-error ratio, with
//! uncorrelated and strongly correlated estimates.

use dprep::am::reference_contour;

fn main() -> dprep::Result<()> {
    let diffs: Vec<f64> = (0..7).map(|i| i as f64 * 0.25).collect();
    let ratios = [0.5, 0.75, 1.0, 1.5, 2.0];
    for corr in [0.0, 0.95] {
        let grid = reference_contour(5.0, 2.5, corr, &diffs, &ratios, 500, 2021)?;
        println!("corr = {corr}");
        print!("{:>10}", "diff\\ratio");
        ratios.iter().for_each(|r| print!("{r:>7}"));
        println!();
        for (d, row) in grid.diff_axis.iter().zip(&grid.values) {
            print!("{d:>10.2}");
            row.iter().for_each(|v| print!("{v:>7.3}"));
            println!();
        }
    }
    Ok(())
}
