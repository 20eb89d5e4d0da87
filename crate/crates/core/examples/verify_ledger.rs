//! Runs the full check ledger and prints a summary, optionally with a
//! tightened tolerance.

use eigenbound::verify::{run_verification, VerifyConfig};

fn main() -> eigenbound::Result<()> {
    let mut cfg = VerifyConfig::default();
    let checks = run_verification(&cfg)?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    println!("{} checks, {} failed", checks.len(), failed.len());

    cfg.tolerance_overrides.insert("xi_mean".into(), 1e-30);
    let tight = run_verification(&cfg)?;
    for c in tight.iter().filter(|c| !c.pass) {
        println!(
            "FAIL {} (|Δ| = {:e}, tol = {:e})",
            c.name, c.abs_discrepancy, c.tolerance
        );
    }
    Ok(())
}
