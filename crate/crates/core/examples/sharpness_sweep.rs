//! How far the bounds sit below the true cap eigenvalue as the cap grows.

use std::f64::consts::FRAC_PI_2;

use eigenbound::oracle::sharpness_sweep;

fn main() {
    let radii: Vec<f64> = (1..=6).map(|i| FRAC_PI_2 * f64::from(i) / 6.0).collect();
    for n in [2, 5, 10] {
        println!("n = {n}");
        for row in sharpness_sweep(n, 1.0, &radii) {
            match (&row.error, row.lambda_true, row.best) {
                (None, Some(lam), Some(best)) => println!(
                    "  R = {:.4}  λ = {lam:>10.5}  best = {best:>10.5}  best/λ = {:.4}",
                    row.r,
                    best / lam
                ),
                (err, ..) => println!("  R = {:.4}  failed: {err:?}", row.r),
            }
        }
    }
}
