//! All lower bounds for a few geometries, including the K = 0 limit.

use std::f64::consts::PI;

use eigenbound::bounds::{bound_report, hemisphere_input, ratio_cap, GeometryInput};

fn main() -> eigenbound::Result<()> {
    let cases = [
        hemisphere_input(10, 1.0)?,
        GeometryInput::new(3, 1.0, 2.0)?,
        GeometryInput::new(50, 0.5, 1.0)?,
        GeometryInput::new(2, 0.0, PI)?,
    ];
    println!(
        "{:>3} {:>5} {:>8} {:>10} {:>10} {:>10} {:>10} {:>8}",
        "n", "K", "d̃", "reilly", "ling", "refined", "implicit", "ratio"
    );
    for g in cases {
        let r = bound_report(&g)?;
        let reilly = r.reilly.map_or("-".to_string(), |v| format!("{v:.6}"));
        println!(
            "{:>3} {:>5} {:>8.5} {reilly:>10} {:>10.6} {:>10.6} {:>10.6} {:>8.6}",
            g.n, g.k, g.d_tilde, r.ling, r.refined, r.implicit, r.ratio_refined_over_ling
        );
    }
    println!("ratio never exceeds {:.6}", ratio_cap());
    Ok(())
}
