//! The comparison function ξ, its moments, and the profile z = 1 + δξ.

use std::f64::consts::FRAC_PI_2;

use eigenbound::comparison::{
    inv_sqrt_z_integral, jensen_baseline, variance_refined_rhs, xi, xi_integral_form, xi_mean,
    xi_second_moment, ZFunction,
};

fn main() -> eigenbound::Result<()> {
    println!("{:>8} {:>20} {:>20}", "t", "ξ(t)", "integral form");
    for i in 0..=6 {
        let t = FRAC_PI_2 * f64::from(i) / 6.0;
        let integral = if i < 6 { xi_integral_form(t)? } else { 0.0 };
        println!("{t:8.5} {:20.15} {integral:20.15}", xi(t)?);
    }

    let m = xi_mean(1e-10);
    let s = xi_second_moment(1e-9);
    println!("∫ξ  = {:.15} (target {:.15})", m.lhs, m.rhs);
    println!("∫ξ² = {:.15} (target {:.15})", s.lhs, s.rhs);

    let z = ZFunction::new(0.4)?;
    println!(
        "δ = 0.4: mean z = {:.12}, Var z = {:.12}",
        z.mean()?,
        z.variance()?
    );

    // exact ≥ variance-refined ≥ Jensen
    for delta in [0.1, 0.25, 0.45] {
        println!(
            "δ = {delta:4}: {:.10} ≥ {:.10} ≥ {:.10}",
            inv_sqrt_z_integral(delta)?,
            variance_refined_rhs(delta)?,
            jensen_baseline(delta)?
        );
    }
    Ok(())
}
