//! Laplace releases against a capped ledger: the second release at
//! epsilon 0.6 is refused before any noise is drawn.

use dprep::dp::{budget_status, release_scalar, BudgetLedger, PrivacyParams, RngStream};
use dprep::Error;

fn main() -> dprep::Result<()> {
    let dir = std::env::temp_dir().join("dprep-budget-example");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("ledger.ndjson");
    let _ = std::fs::remove_file(&path);

    let mut ledger = BudgetLedger::open(&path, Some(1.0))?;
    let mut noise = RngStream::root(2021).derive("example", 0);
    let eps = PrivacyParams::new(0.6)?;

    let first = release_scalar(17.0, 1.0, eps, &mut ledger, &mut noise)?;
    println!("released {:.3} (true value 17, scale 1/0.6)", first.value);

    match release_scalar(17.0, 1.0, eps, &mut ledger, &mut noise) {
        Err(e @ Error::BudgetRefused { .. }) => println!("second release: {e}"),
        other => println!("unexpected: {other:?}"),
    }

    let status = budget_status(&ledger);
    println!(
        "spent {} of 1.0, remaining {:?}, {} entr{} in {}",
        status.spent,
        status.remaining,
        status.releases,
        if status.releases == 1 { "y" } else { "ies" },
        path.display()
    );
    Ok(())
}
