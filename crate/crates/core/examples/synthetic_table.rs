//! Write a synthetic confidential table to use with the `dprep` binary.
//!
//! ```text
//! cargo run --example synthetic_table -- data.csv 50000 0.9
//! dprep ad-verify --input data.csv --model "y ~ x1 + x2 + x3" --coef x2 \
//!     --region inflate:1.96 --gamma-hat 0.971 --sigma-hat 0.031 --n0 10000 \
//!     --epsilon 1 --M 25 --seed 7 --ledger ledger.ndjson --out ad.json
//! ```

use std::fs::File;

use dprep::dp::RngStream;
use dprep::sim::SimDesign;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "synthetic.csv".into());
    let rows: usize = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(50_000);
    let b2: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.9);

    let design = SimDesign {
        b2,
        ..SimDesign::default()
    };
    let data = design.generate(rows, &mut RngStream::root(2022).derive("table", 0))?;
    data.write_delimited(File::create(&path)?, b',')?;
    println!("wrote {rows} rows to {path} (y = 2 x1 + {b2} x2 + 3 x3 + N(0, 9))");
    Ok(())
}
