//! Fit a linear model with a categorical covariate and a log transform, then
//! print estimates with 95% t intervals.

use dprep::model::{fit_ols, ColumnKind, Dataset, ModelSpec, Schema};

const TABLE: &str = "\
income,age,school,hours
31000,23,public,38
45500,35,private,40
52000,41,public,45
28000,22,public,30
61000,50,private,42
39000,30,public,40
70500,47,private,50
33500,27,public,36
48000,39,private,41
57000,44,public,48
";

fn main() -> dprep::Result<()> {
    let schema = Schema::new().with("school", ColumnKind::Categorical);
    let data = Dataset::read_delimited(TABLE.as_bytes(), &schema, b',')?;
    // `school` expands to the indicator school_public (reference level: private)
    let spec = ModelSpec::from_formula("income ~ age + school + log(hours)", &data)?;
    let fit = fit_ols(&data, &spec)?;

    println!(
        "{spec}   (n = {}, residual df = {})",
        fit.n, fit.residual_df
    );
    for (j, label) in spec.labels().iter().enumerate() {
        let ci = fit.confidence_interval(j, 0.95)?;
        println!(
            "{label:>14} {:>12.2}  se {:>10.2}  [{:.2}, {:.2}]",
            fit.coefficients[j], fit.stderrs[j], ci.lower, ci.upper
        );
    }
    println!("sigma^2 = {:.1}", fit.sigma2_hat);
    Ok(())
}
