//! First Dirichlet eigenvalue of a geodesic cap `B(R)` in the round
//! `n`-sphere of curvature `K`.
//!
//! Radial eigenfunctions solve
//!
//! ```text
//! u'' + (n−1)·√K·cot(√K·r)·u' + λu = 0,   u(0) = 1, u'(0) = 0,
//! ```
//!
//! and λ₁ is the smallest λ for which `u` vanishes at `r = R`. By Sturm
//! comparison, `u(·; λ)` has a zero in `(0, R]` exactly when `λ ≥ λ₁`, so λ₁
//! is found by bisection on that predicate. Caps with `R ≤ π/(2√K)` have
//! mean-convex boundary; the hemisphere has `λ₁ = nK` with `u = cos(√K r)`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound_report, GeometryInput};
use crate::check::CheckRecord;
use crate::error::{Error, Result};

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;
const BISECTION_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapProblem {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl CapProblem {
    /// Requires `n ≥ 2`, `K > 0` and `0 < R ≤ π/(2√K)`; beyond the hemisphere
    /// the boundary has negative mean curvature.
    pub fn new(n: u32, k: f64, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGeometry(format!(
                "dimension n must be at least 2, got {n}"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "curvature K must be positive, got {k}"
            )));
        }
        let r_max = FRAC_PI_2 / k.sqrt();
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "cap radius R must be positive, got {r}"
            )));
        }
        if r > r_max * (1.0 + 1e-12) {
            return Err(Error::InvalidGeometry(format!(
                "cap radius R = {r} exceeds π/(2√K) = {r_max}; the boundary mean curvature \
                 would be negative"
            )));
        }
        Ok(CapProblem {
            n,
            k,
            r: r.min(r_max),
        })
    }

    /// In-diameter of the cap, `2R`.
    pub fn d_tilde(&self) -> f64 {
        2.0 * self.r
    }

    pub fn geometry(&self) -> Result<GeometryInput> {
        GeometryInput::new(self.n, self.k, self.d_tilde())
    }

    fn start_radius(&self) -> f64 {
        (1e-6 * self.r.max(1.0)).min(1e-4 * self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingResult {
    pub lambda: f64,
    /// `|u(R)|` at the returned λ.
    pub residual: f64,
    pub bisection_iterations: u32,
    /// Accepted integrator steps in the final solve.
    pub ode_steps: u32,
}

/// `(u(r₀), u'(r₀))` from the even series `u = 1 + c₂r² + c₄r⁴ + O(r⁶)`.
///
/// Matching powers in the radial equation with
/// `√K·cot(√K r) = 1/r − K·r/3 + O(r³)` gives
/// `c₂ = −λ/(2n)` and `c₄ = c₂·(2(n−1)K/3 − λ)/(4(n+2))`.
pub fn series_start(p: &CapProblem, lambda: f64, r0: f64) -> Result<(f64, f64)> {
    if !(r0 > 0.0 && r0 <= 1e-4 * p.r) {
        return Err(Error::domain(
            "series_start",
            format!("need 0 < r0 ≤ 1e-4·R = {}, got {r0}", 1e-4 * p.r),
        ));
    }
    let n = f64::from(p.n);
    let c2 = -lambda / (2.0 * n);
    let c4 = c2 * (2.0 * (n - 1.0) * p.k / 3.0 - lambda) / (4.0 * (n + 2.0));
    let r2 = r0 * r0;
    Ok((
        1.0 + c2 * r2 + c4 * r2 * r2,
        2.0 * c2 * r0 + 4.0 * c4 * r2 * r0,
    ))
}

struct Shot {
    u_end: f64,
    /// First accepted step end with `u ≤ 0`.
    first_zero: Option<f64>,
    steps: u32,
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn shoot(p: &CapProblem, lambda: f64, stop_at_zero: bool) -> Result<Shot> {
    let sk = p.k.sqrt();
    let damping = f64::from(p.n - 1) * sk;
    let rhs = |r: f64, y: [f64; 2]| -> [f64; 2] {
        let (s, c) = (sk * r).sin_cos();
        [y[1], -damping * c / s * y[1] - lambda * y[0]]
    };

    let mut r = p.start_radius();
    let (u0, v0) = series_start(p, lambda, r)?;
    let mut y = [u0, v0];
    let mut h = r;
    let mut steps = 0u32;
    let mut first_zero = None;

    while r < p.r {
        if steps > 1_000_000 {
            return Err(Error::Bracket(format!(
                "integrator exceeded step budget at r = {r}, λ = {lambda}"
            )));
        }
        let last = r + h >= p.r;
        if last {
            h = p.r - r;
        }
        let mut k = [[0.0; 2]; 7];
        k[0] = rhs(r, y);
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = rhs(r + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut e = [0.0; 2];
        for s in 0..7 {
            for i in 0..2 {
                y5[i] += h * B5[s] * k[s][i];
                e[i] += h * (B5[s] - B4[s]) * k[s][i];
            }
        }
        let err = (0..2)
            .map(|i| e[i].abs() / (ATOL + RTOL * y[i].abs().max(y5[i].abs())))
            .fold(0.0, f64::max);
        if !err.is_finite() {
            return Err(Error::Bracket(format!(
                "integrator produced a non-finite state at r = {r}, λ = {lambda}"
            )));
        }
        if err <= 1.0 {
            r = if last { p.r } else { r + h };
            y = y5;
            steps += 1;
            if y[0] <= 0.0 && first_zero.is_none() {
                first_zero = Some(r);
                if stop_at_zero {
                    break;
                }
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(Shot {
        u_end: y[0],
        first_zero,
        steps,
    })
}

/// λ₁ of the cap by shooting and bisection.
pub fn cap_eigenvalue(p: &CapProblem) -> Result<ShootingResult> {
    let has_zero =
        |lambda: f64| -> Result<bool> { Ok(shoot(p, lambda, true)?.first_zero.is_some()) };

    let mut lo = 0.0;
    let mut hi = 4.0 * f64::from(p.n) * (std::f64::consts::PI / p.r).powi(2) * p.k;
    let mut doublings = 0;
    while !has_zero(hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::Bracket(format!(
                "no sign change of u(R) below λ = {hi:e}"
            )));
        }
    }

    let mut iterations = 0u32;
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if has_zero(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }

    let lambda = 0.5 * (lo + hi);
    let shot = shoot(p, lambda, false)?;
    if let Some(r) = shot.first_zero {
        if r < p.r * (1.0 - 1e-6) {
            return Err(Error::Oscillation { r, radius: p.r });
        }
    }
    Ok(ShootingResult {
        lambda,
        residual: shot.u_end.abs(),
        bisection_iterations: iterations,
        ode_steps: shot.steps,
    })
}

/// λ₁ of the cap from a cell-centred second-order finite-difference
/// discretisation of `−(w u')'/w` with `w = sin^{n−1}(√K r)`, solved by
/// inverse iteration on the symmetrised tridiagonal matrix.
///
/// Independent of the shooting path; used only for cross-validation.
pub fn fd_cap_eigenvalue(p: &CapProblem, nodes: usize) -> Result<f64> {
    if nodes < 3 {
        return Err(Error::domain("fd_cap_eigenvalue", "need at least 3 nodes"));
    }
    let sk = p.k.sqrt();
    let m = f64::from(p.n - 1);
    // Nodes r_i = (i − 1/2)h, i = 1..=N, with the Dirichlet ghost at r_{N+1} = R.
    let h = p.r / (nodes as f64 + 0.5);
    let log_w = |r: f64| -> f64 {
        if r == 0.0 {
            f64::NEG_INFINITY
        } else {
            m * (sk * r).sin().ln()
        }
    };
    let h2 = h * h;
    let node_lw: Vec<f64> = (1..=nodes).map(|i| log_w((i as f64 - 0.5) * h)).collect();
    let face_lw: Vec<f64> = (0..=nodes).map(|i| log_w(i as f64 * h)).collect();

    let diag: Vec<f64> = (0..nodes)
        .map(|i| ((face_lw[i] - node_lw[i]).exp() + (face_lw[i + 1] - node_lw[i]).exp()) / h2)
        .collect();
    let off: Vec<f64> = (0..nodes - 1)
        .map(|i| -(face_lw[i + 1] - 0.5 * (node_lw[i] + node_lw[i + 1])).exp() / h2)
        .collect();

    let apply = |x: &[f64]| -> Vec<f64> {
        (0..nodes)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += off[i - 1] * x[i - 1];
                }
                if i + 1 < nodes {
                    s += off[i] * x[i + 1];
                }
                s
            })
            .collect()
    };

    let mut x: Vec<f64> = (0..nodes)
        .map(|i| (FRAC_PI_2 * (i as f64 + 0.5) / nodes as f64).cos())
        .collect();
    let mut lambda = f64::INFINITY;
    for _ in 0..1000 {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let ax = apply(&x);
        let rq: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        if (rq - lambda).abs() <= 1e-15 * rq.abs() {
            return Ok(rq);
        }
        lambda = rq;
        x = solve_tridiagonal(&diag, &off, &x)?;
    }
    Ok(lambda)
}

/// Thomas algorithm for a symmetric positive-definite tridiagonal system.
fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if !(denom.is_finite() && denom != 0.0) {
            return Err(Error::Solver("singular tridiagonal system".into()));
        }
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

/// `λ₁(n, c²K, R/c) = c²·λ₁(n, K, R)` from two independent shooting runs.
pub fn scaling_check(p: &CapProblem, c: f64, tol: f64) -> Result<CheckRecord> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(
            "scaling_check",
            format!("need c > 0, got {c}"),
        ));
    }
    let scaled = CapProblem::new(p.n, c * c * p.k, p.r / c)?;
    let base = cap_eigenvalue(p)?.lambda;
    let other = cap_eigenvalue(&scaled)?.lambda;
    let rel = (other - c * c * base).abs() / (c * c * base);
    let mut rec = CheckRecord::equality("cap_scaling", "scaling", other, c * c * base, tol);
    rec.abs_discrepancy = rel;
    rec.pass = rel <= tol;
    Ok(rec)
}

/// One row of a sharpness sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub d_tilde: f64,
    pub lambda_true: Option<f64>,
    pub reilly: Option<f64>,
    pub ling: Option<f64>,
    pub refined: Option<f64>,
    pub implicit: Option<f64>,
    pub best: Option<f64>,
    pub gap_best: Option<f64>,
    pub ratio: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(n: u32, k: f64, r: f64) -> Self {
        SweepRow {
            n,
            k,
            r,
            d_tilde: 2.0 * r,
            lambda_true: None,
            reilly: None,
            ling: None,
            refined: None,
            implicit: None,
            best: None,
            gap_best: None,
            ratio: None,
            error: None,
        }
    }

    /// `true` when the oracle ran and no bound exceeded its eigenvalue by
    /// more than [`SOUNDNESS_RTOL`].
    pub fn is_sound(&self) -> bool {
        self.error.is_none()
    }
}

/// Relative slack allowed between a bound and the oracle eigenvalue.
pub const SOUNDNESS_RTOL: f64 = 1e-8;

/// Oracle eigenvalue and all bounds (with `d̃ = 2R`) for one cap.
pub fn sweep_row(n: u32, k: f64, r: f64) -> SweepRow {
    let mut row = SweepRow::empty(n, k, r);
    let outcome = (|| -> Result<()> {
        let p = CapProblem::new(n, k, r)?;
        let report = bound_report(&p.geometry()?)?;
        row.reilly = report.reilly;
        row.ling = Some(report.ling);
        row.refined = Some(report.refined);
        row.implicit = Some(report.implicit);
        row.best = Some(report.best);
        row.ratio = Some(report.ratio_refined_over_ling);
        let lambda = cap_eigenvalue(&p)?.lambda;
        row.lambda_true = Some(lambda);
        row.gap_best = Some(lambda - report.best);
        let slack = SOUNDNESS_RTOL * lambda;
        let named = [
            ("reilly", report.reilly),
            ("ling", Some(report.ling)),
            ("refined", Some(report.refined)),
            ("implicit", Some(report.implicit)),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                if v > lambda + slack {
                    return Err(Error::Solver(format!(
                        "{name} bound {v} exceeds oracle eigenvalue {lambda}"
                    )));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row
}

/// One row per radius, computed in parallel, returned in input order.
/// Failed rows carry an error instead of aborting the sweep.
pub fn sharpness_sweep(n: u32, k: f64, r_values: &[f64]) -> Vec<SweepRow> {
    r_values.par_iter().map(|&r| sweep_row(n, k, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn admissibility() {
        assert!(CapProblem::new(2, 1.0, 2.0).is_err());
        assert!(CapProblem::new(1, 1.0, 1.0).is_err());
        assert!(CapProblem::new(2, 0.0, 1.0).is_err());
        assert!(CapProblem::new(2, 1.0, -1.0).is_err());
        assert!(CapProblem::new(2, 1.0, FRAC_PI_2).is_ok());
        assert!(CapProblem::new(2, 1.0, FRAC_PI_2 * (1.0 + 1e-13)).is_ok());
    }

    #[test]
    fn series_start_cases() {
        let p = CapProblem::new(10, 1.0, FRAC_PI_2).unwrap();
        assert_eq!(series_start(&p, 0.0, 1e-6).unwrap(), (1.0, 0.0));
        let r0 = 1e-4;
        let (u, v) = series_start(&p, 10.0, r0).unwrap();
        assert!((u - r0.cos()).abs() < 1e-22);
        assert!((v + r0.sin()).abs() < 1e-18);
        assert!(series_start(&p, 1.0, 1.0).is_err());
        assert!(series_start(&p, 1.0, 0.0).is_err());
    }

    #[test]
    fn hemisphere_is_exact() {
        for n in [2u32, 10] {
            let p = CapProblem::new(n, 1.0, FRAC_PI_2).unwrap();
            let s = cap_eigenvalue(&p).unwrap();
            assert!(
                (s.lambda - f64::from(n)).abs() <= 1e-8 * f64::from(n),
                "{s:?}"
            );
            assert!(s.residual <= 1e-10, "{s:?}");
        }
    }

    #[test]
    fn quarter_cap_agrees_with_finite_differences() {
        let p = CapProblem::new(2, 1.0, PI / 4.0).unwrap();
        let s = cap_eigenvalue(&p).unwrap();
        let fd = fd_cap_eigenvalue(&p, 10_000).unwrap();
        assert!(
            (s.lambda - fd).abs() <= 1e-6 * s.lambda,
            "{} vs {fd}",
            s.lambda
        );
    }

    #[test]
    fn scaling() {
        let p = CapProblem::new(2, 1.0, PI / 4.0).unwrap();
        assert!(scaling_check(&p, 2.0, 1e-8).unwrap().pass);
        assert!(scaling_check(&p, 1.0, 1e-15).unwrap().pass);
        assert!(scaling_check(&p, -1.0, 1e-8).is_err());
    }

    #[test]
    fn rows_record_failures() {
        let row = sweep_row(2, 1.0, 3.0);
        assert!(row.error.is_some());
        assert!(row.lambda_true.is_none());
    }
}
