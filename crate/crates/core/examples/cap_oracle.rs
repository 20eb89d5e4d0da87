//! First Dirichlet eigenvalue of geodesic caps by shooting, checked against
//! finite differences and the bounds.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use eigenbound::bounds::bound_report;
use eigenbound::oracle::{cap_eigenvalue, fd_cap_eigenvalue, scaling_check, CapProblem};

fn main() -> eigenbound::Result<()> {
    let hemi = CapProblem::new(10, 1.0, FRAC_PI_2)?;
    let s = cap_eigenvalue(&hemi)?;
    println!(
        "hemisphere n = 10: λ = {:.12} ({} bisections, {} steps)",
        s.lambda, s.bisection_iterations, s.ode_steps
    );

    let p = CapProblem::new(2, 1.0, FRAC_PI_4)?;
    let s = cap_eigenvalue(&p)?;
    let fd = fd_cap_eigenvalue(&p, 10_000)?;
    let best = bound_report(&p.geometry()?)?.best;
    println!(
        "cap n = 2, R = π/4: shooting {:.10}, finite differences {fd:.10}",
        s.lambda
    );
    println!(
        "best lower bound {best:.10}, residual |u(R)| = {:.1e}",
        s.residual
    );

    let rec = scaling_check(&p, 2.0, 1e-8)?;
    println!(
        "scaling by c = 2: {} vs {} ({})",
        rec.lhs, rec.rhs, rec.pass
    );
    Ok(())
}
