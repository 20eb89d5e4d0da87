//! Boundary term B_ε of the truncated reduction and its limit as ε → 0.

use eigenbound::identities::{boundary_limit, boundary_term, truncated_identity};
use eigenbound::quadrature::{richardson_limit, Side};

fn main() -> eigenbound::Result<()> {
    for eps in [0.1, 1e-2, 1e-3, 1e-4, 1e-5] {
        println!("B({eps:e}) = {:.12}", boundary_term(eps)?);
    }

    let lim = richardson_limit(|e| boundary_term(e).unwrap_or(f64::NAN), Side::Right, 0.0)?;
    println!(
        "extrapolated limit {:.12} ± {:.1e} ({} terms), −2π/3 = {:.12}",
        lim.value,
        lim.error_estimate,
        lim.terms,
        -2.0 * std::f64::consts::PI / 3.0
    );
    println!(
        "limit check at 1e-6: {}",
        if boundary_limit(1e-6).pass {
            "pass"
        } else {
            "FAIL"
        }
    );

    for eps in [0.5, 1e-2, 1e-4] {
        let r = truncated_identity(eps, 1e-8);
        println!("{}: lhs {:.14} rhs {:.14}", r.name, r.lhs, r.rhs);
    }
    Ok(())
}
