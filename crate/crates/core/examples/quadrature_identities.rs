//! Tanh-sinh quadrature on the log-cosine integrals, which have a
//! logarithmic singularity at π/2.

use std::f64::consts::FRAC_PI_2;

use eigenbound::identities::{log_cos_closed_forms, log_cos_integrals};
use eigenbound::quadrature::{integrate, integrate_weighted, QuadratureConfig, Weight};

fn main() -> eigenbound::Result<()> {
    let cfg = QuadratureConfig::default();

    let r = integrate(|t: f64| t.cos().ln(), 0.0, FRAC_PI_2, &cfg)?;
    println!(
        "∫ log cos     = {:.16}  (est. error {:.1e}, {} evaluations)",
        r.value, r.error_estimate, r.evaluations
    );

    let closed = log_cos_closed_forms();
    for (w, c) in [(Weight::T, closed[1]), (Weight::T2, closed[2])] {
        let r = integrate_weighted(|t: f64| t.cos().ln(), w, 0.0, FRAC_PI_2, &cfg)?;
        println!("{w:?}-weighted   = {:.16}  closed form {c:.16}", r.value);
    }

    for rec in log_cos_integrals(1e-9) {
        println!(
            "{:<22} |Δ| = {:.1e}  {}",
            rec.name,
            rec.abs_discrepancy,
            if rec.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
