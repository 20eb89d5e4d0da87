//! ζ(3), the variance constant V, and the exact certificate that V < 1/4.

use eigenbound::constants::{
    rational_certificates, variance_below_quarter_certified, variance_constant, zeta3,
    zeta3_bracket,
};

fn main() {
    let (lo, hi) = zeta3_bracket(10);
    println!("ζ(3) ∈ ({lo:.10}, {hi:.10}) from ten terms");
    println!("ζ(3) = {:.16}", zeta3());
    println!("V    = {:.16}", variance_constant());

    for c in rational_certificates() {
        println!("  {c}");
    }
    println!("V < 1/4 certified: {}", variance_below_quarter_certified());
}
