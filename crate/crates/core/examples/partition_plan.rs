//! Seeded partitions: sizes differ by at most one, the plan is rebuilt from
//! its (seed, M, N) record alone.

use dprep::model::Dataset;
use dprep::partition::{make_partition, subset_view, PlanRecord};

fn main() -> dprep::Result<()> {
    let plan = make_partition(11, 5, 2021)?;
    println!("sizes {:?}", plan.sizes());
    for l in 0..plan.subsets() {
        println!("subset {l}: rows {:?}", plan.rows_of(l));
    }

    let record = plan.record().to_string();
    println!("record: {record}");
    let again = record.parse::<PlanRecord>()?.rebuild()?;
    assert_eq!(again.assignment(), plan.assignment());

    let data = Dataset::from_columns([("x", (0..11).map(f64::from).collect())])?;
    let first = subset_view(&data, &plan, 0)?;
    println!("subset 0 values: {:?}", first.column("x").unwrap());
    Ok(())
}
