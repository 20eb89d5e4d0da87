// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use eigenbound::bounds::{self, GeometryInput};
use eigenbound::comparison::{
    inv_sqrt_z_integral, jensen_baseline, variance_refined_rhs, xi_mean, xi_second_moment,
};
use eigenbound::constants::{rational_certificates, variance_constant, zeta3};
use eigenbound::identities::{boundary_limit, log_cos_integrals, truncated_identity};
use eigenbound::oracle::{cap_eigenvalue, CapProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn variance() -> Outcome {
    let v = variance_constant();
    let d = (v - 0.185_026_145_6).abs();
    ensure(d <= 1e-9, format!("V = {v}, |Δ| = {d:e}"))?;
    Ok(format!("V = {v:.12}, |Δ| = {d:.1e}"))
}

fn mean_identity() -> Outcome {
    let r = xi_mean(1e-10);
    ensure(r.pass, format!("{r:?}"))?;
    ensure((r.rhs + FRAC_PI_2).abs() == 0.0, "wrong target")?;
    Ok(format!(
        "∫ξ = {:.15}, |Δ| = {:.1e}",
        r.lhs, r.abs_discrepancy
    ))
}

fn second_moment() -> Outcome {
    let r = xi_second_moment(1e-9);
    let closed = PI * (2.0 * zeta3() - (PI * PI + 1.0) / 6.0);
    ensure(r.pass && (r.lhs - closed).abs() <= 1e-9, format!("{r:?}"))?;
    Ok(format!(
        "∫ξ² = {:.15}, |Δ| = {:.1e}",
        r.lhs,
        (r.lhs - closed).abs()
    ))
}

fn log_cos() -> Outcome {
    let recs = log_cos_integrals(1e-9);
    ensure(recs.len() == 3, "expected three integrals")?;
    let z = zeta3();
    let ln2 = std::f64::consts::LN_2;
    let closed = [
        -FRAC_PI_2 * ln2,
        -PI * PI / 8.0 * ln2 - 7.0 / 16.0 * z,
        -PI.powi(3) / 24.0 * ln2 - PI / 4.0 * z,
    ];
    let mut worst = 0.0f64;
    for (r, c) in recs.iter().zip(closed) {
        let d = (r.lhs - c).abs();
        ensure(r.pass && d <= 1e-9, format!("{} off by {d:e}", r.name))?;
        worst = worst.max(d);
    }
    Ok(format!("worst |Δ| = {worst:.1e}"))
}

fn appendix() -> Outcome {
    let lim = boundary_limit(1e-6);
    let d = (lim.lhs + 2.0 * PI / 3.0).abs();
    ensure(
        lim.pass && d <= 1e-6,
        format!("limit {} off by {d:e}", lim.lhs),
    )?;
    let eps = [0.5, 0.2, 0.1, 1e-2, 1e-3, 1e-4];
    let mut worst = 0.0f64;
    for e in eps {
        let r = truncated_identity(e, 1e-8);
        ensure(
            r.pass,
            format!("truncated identity at ε = {e}: {:e}", r.abs_discrepancy),
        )?;
        worst = worst.max(r.abs_discrepancy);
    }
    Ok(format!(
        "lim B = {:.12} (|Δ| = {d:.1e}), truncated worst {worst:.1e} over {} ε",
        lim.lhs,
        eps.len()
    ))
}

fn one_root() -> Outcome {
    let v = variance_constant();
    let n = 1_000_000usize;
    let mut worst = f64::INFINITY;
    let mut worst_power = f64::INFINITY;
    for i in 0..=n {
        let delta = 0.5 * i as f64 / n as f64;
        let inner = 1.0 - delta - 0.25 * v * delta * delta;
        let lhs = 1.0 / (1.0 - delta).sqrt() + 0.375 * v * delta * delta;
        worst = worst.min(lhs - 1.0 / inner.sqrt());
        worst_power = worst_power.min(3.0 - inner.powf(-1.5));
    }
    ensure(worst >= -1e-12, format!("one-root slack {worst:e}"))?;
    ensure(
        worst_power >= -1e-12,
        format!("power-bound slack {worst_power:e}"),
    )?;
    let recs = bounds::one_root_check(n + 1, 1e-12).map_err(|e| e.to_string())?;
    ensure(recs.iter().all(|r| r.pass), "library check disagrees")?;
    Ok(format!(
        "slack ≥ {worst:.1e}, power slack ≥ {worst_power:.3}"
    ))
}

fn certificates() -> Outcome {
    let certs = rational_certificates();
    for c in &certs {
        ensure(c.holds, c.to_string())?;
    }
    for name in [
        "zeta3_integral_test_upper",
        "pi_squared_lower",
        "variance_below_quarter",
        "ratio_cubed_below_nine",
    ] {
        ensure(
            certs.iter().any(|c| c.name == name),
            format!("missing {name}"),
        )?;
    }
    Ok(format!("{} certificates hold", certs.len()))
}

fn dominance() -> Outcome {
    let mut worst = f64::INFINITY;
    for i in 0..10 {
        let d = 0.05 * f64::from(i);
        let exact = inv_sqrt_z_integral(d).map_err(|e| e.to_string())?;
        let refined = variance_refined_rhs(d).map_err(|e| e.to_string())?;
        let jensen = jensen_baseline(d).map_err(|e| e.to_string())?;
        worst = worst.min(exact - refined).min(refined - jensen);
    }
    ensure(worst >= -1e-10, format!("slack {worst:e}"))?;
    Ok(format!("worst slack {worst:.1e}"))
}

fn ratios() -> Outcome {
    let g = bounds::hemisphere_input(10, 1.0).map_err(|e| e.to_string())?;
    let r = bounds::ratio(&g);
    let cap = bounds::ratio_cap();
    ensure((r - 1.0301).abs() <= 5e-4, format!("hemisphere ratio {r}"))?;
    ensure((cap - 1.0443).abs() <= 5e-5, format!("cap {cap}"))?;
    ensure(
        (bounds::refined(&g) / bounds::ling(&g) - r).abs() < 1e-14,
        "ratio formula mismatch",
    )?;
    Ok(format!("n=10 hemisphere {r:.6}, cap {cap:.6}"))
}

fn hemisphere_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2u32, 3, 5, 10] {
        for k in [0.25, 1.0, 4.0] {
            let p = CapProblem::new(n, k, FRAC_PI_2 / f64::sqrt(k)).map_err(|e| e.to_string())?;
            let lam = cap_eigenvalue(&p).map_err(|e| e.to_string())?.lambda;
            let exact = f64::from(n) * k;
            let rel = (lam - exact).abs() / exact;
            ensure(rel <= 1e-8, format!("n = {n}, K = {k}: λ = {lam}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("12 caps, worst relative error {worst:.1e}"))
}

fn soundness() -> Outcome {
    let radii = [0.3, 0.6, 0.9, 1.2, FRAC_PI_2];
    let mut min_gap = f64::INFINITY;
    for n in [2u32, 5, 10] {
        for r in radii {
            let p = CapProblem::new(n, 1.0, r).map_err(|e| e.to_string())?;
            let lam = cap_eigenvalue(&p).map_err(|e| e.to_string())?.lambda;
            let g = GeometryInput::new(n, 1.0, 2.0 * r).map_err(|e| e.to_string())?;
            let reilly = bounds::reilly(&g).map_err(|e| e.to_string())?;
            let ling = bounds::ling(&g);
            let refined = bounds::refined(&g);
            let implicit = bounds::implicit(&g).map_err(|e| e.to_string())?;
            for (name, b) in [
                ("reilly", reilly),
                ("ling", ling),
                ("refined", refined),
                ("implicit", implicit),
            ] {
                ensure(
                    b <= lam * (1.0 + 1e-8),
                    format!("{name} = {b} exceeds λ = {lam} at n = {n}, R = {r}"),
                )?;
                min_gap = min_gap.min((lam - b) / lam);
            }
            ensure(
                implicit > refined && refined > ling,
                format!("ordering fails at n = {n}, R = {r}: {ling} {refined} {implicit}"),
            )?;
        }
    }
    Ok(format!("15 caps, smallest relative gap {min_gap:.2e}"))
}

fn quadratic_certificate() -> Outcome {
    let v = variance_constant();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=100u32);
        let k = rng.gen_range(0.0..20.0);
        let d_tilde = rng.gen_range(1e-2..10.0);
        let g = GeometryInput::new(n, k, d_tilde).map_err(|e| e.to_string())?;
        let alpha = 0.5 * f64::from(n - 1) * k;
        let d = (PI / d_tilde).powi(2);
        let lam = bounds::refined(&g);
        let res = lam * lam - (alpha + d) * lam - 0.25 * v * alpha * alpha;
        worst = worst.max((res / (lam * lam)).abs());
    }
    ensure(worst <= 1e-9, format!("worst relative residual {worst:e}"))?;
    Ok(format!("10^4 inputs, worst relative residual {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("variance constant", variance, 1),
        ("mean identity", mean_identity, 1),
        ("second moment", second_moment, 1),
        ("log-cos integrals", log_cos, 1),
        ("boundary limit and truncated identity", appendix, 5),
        ("one-root inequality", one_root, 5),
        ("rational certificates", certificates, 1),
        ("variance-Jensen dominance", dominance, 5),
        ("ratio claims", ratios, 1),
        ("hemisphere oracle", hemisphere_oracle, 10),
        ("soundness sweep", soundness, 60),
        ("quadratic certificate", quadratic_certificate, 5),
    ];
    let mut failures = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {elapsed:?}, limit {limit} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
