//! The reduction of `∫₀^{π/2} ξ² dt` to log-cosine integrals.
//!
//! Writing `a = π/2`, `A = π²/4`, `P(t) = t² − A` and `u = a − ε`,
//! repeated integration by parts gives
//!
//! ```text
//! ∫₀ᵘ ξ² dt = u − (4/3)u³ + B_ε + (2π²/3)∫₀ᵘ log cos t dt − 8∫₀ᵘ t² log cos t dt
//! ```
//!
//! with an explicit boundary term `B_ε` whose singular parts cancel, leaving
//! `B_ε → −2π/3`. This module evaluates each piece and checks the identity
//! at finite `ε` and in the limit.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::check::CheckRecord;
use crate::comparison::xi_unchecked;
use crate::constants::{zeta3, SharedConstants};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate, integrate_weighted, richardson_limit, QuadratureConfig, Side, Weight,
};

/// Truncation data for the appendix reduction at offset `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixQuantities {
    pub a: f64,
    pub big_a: f64,
    pub u: f64,
    pub epsilon: f64,
}

impl AppendixQuantities {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < FRAC_PI_2) {
            return Err(Error::domain(
                "AppendixQuantities::new",
                format!("need 0 < ε < π/2, got {epsilon}"),
            ));
        }
        Ok(AppendixQuantities {
            a: FRAC_PI_2,
            big_a: PI * PI / 4.0,
            u: FRAC_PI_2 - epsilon,
            epsilon,
        })
    }

    /// `P(t) = t² − A`.
    pub fn p(&self, t: f64) -> f64 {
        t * t - self.big_a
    }

    /// The five summands of `B_ε`, with `tan u = cot ε`, `sec²u = csc²ε`,
    /// `log cos u = log sin ε` and `P(u) = −ε(u + a)`.
    pub fn boundary_summands(&self) -> [f64; 5] {
        let (se, ce) = self.epsilon.sin_cos();
        let tan_u = ce / se;
        let sec2_u = 1.0 / (se * se);
        let log_cos_u = se.ln();
        let p = -self.epsilon * (self.u + self.a);
        summands(self.u, self.big_a, p, tan_u, sec2_u, log_cos_u)
    }

    /// The same summands evaluated with trigonometric functions of `u`.
    pub fn boundary_summands_direct(&self) -> [f64; 5] {
        let u = self.u;
        let c = u.cos();
        summands(u, self.big_a, self.p(u), u.tan(), 1.0 / (c * c), c.ln())
    }

    /// `B_ε`.
    pub fn boundary_term(&self) -> f64 {
        self.boundary_summands().iter().sum()
    }
}

fn summands(u: f64, big_a: f64, p: f64, tan_u: f64, sec2_u: f64, log_cos_u: f64) -> [f64; 5] {
    [
        2.0 / 3.0 * (3.0 * u * u - big_a) * tan_u,
        p * p * tan_u * sec2_u / 3.0,
        4.0 / 3.0 * u * p * sec2_u,
        2.0 / 3.0 * p * p * tan_u,
        // u³ − A·u = u·P(u)
        8.0 / 3.0 * u * p * log_cos_u,
    ]
}

/// `B_ε` for `0 < ε < π/2`.
pub fn boundary_term(epsilon: f64) -> Result<f64> {
    Ok(AppendixQuantities::new(epsilon)?.boundary_term())
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn log_cos(t: f64) -> f64 {
    t.cos().ln()
}

/// Closed forms of `∫₀^{π/2} tᵏ log cos t dt` for `k = 0, 1, 2`.
pub fn log_cos_closed_forms() -> [f64; 3] {
    let z = zeta3();
    [
        -FRAC_PI_2 * LN_2,
        -PI * PI / 8.0 * LN_2 - 7.0 / 16.0 * z,
        -PI.powi(3) / 24.0 * LN_2 - PI / 4.0 * z,
    ]
}

/// The three log-cosine integrals against their closed forms.
pub fn log_cos_integrals(tol: f64) -> Vec<CheckRecord> {
    let names = [
        "log_cos_integral",
        "t_log_cos_integral",
        "t2_log_cos_integral",
    ];
    let weights = [Weight::One, Weight::T, Weight::T2];
    let closed = log_cos_closed_forms();
    names
        .iter()
        .zip(weights)
        .zip(closed)
        .map(
            |((name, w), rhs)| match integrate_weighted(log_cos, w, 0.0, FRAC_PI_2, &cfg()) {
                Ok(r) if r.converged => {
                    CheckRecord::equality(*name, "log-cos-integrals", r.value, rhs, tol)
                }
                Ok(r) => CheckRecord::equality(*name, "log-cos-integrals", r.value, rhs, tol)
                    .fail_with("quadrature did not converge"),
                Err(e) => CheckRecord::failed(*name, "log-cos-integrals", tol, e),
            },
        )
        .collect()
}

/// Partial sum of `log(2 cos t) = Σ (−1)^{k+1} cos(2kt)/k`, minus `log 2`.
///
/// The series converges only conditionally; away from `±π/2` the error of
/// the `N`-term sum is `O(1/(N·cos t))`.
pub fn fourier_logcos(t: f64, terms: u64) -> Result<f64> {
    if t.is_nan() || t.abs() >= FRAC_PI_2 {
        return Err(Error::domain(
            "fourier_logcos",
            format!("need |t| < π/2, got {t}"),
        ));
    }
    if terms == 0 {
        return Err(Error::domain("fourier_logcos", "terms must be positive"));
    }
    let mut sum = 0.0;
    for k in (1..=terms).rev() {
        let kf = k as f64;
        let term = (2.0 * kf * t).cos() / kf;
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum - LN_2)
}

/// `(∫₀^{π/2} t·cos(2kt) dt, ∫₀^{π/2} t²·cos(2kt) dt)
///   = (((−1)^k − 1)/(4k²), π(−1)^k/(4k²))`.
pub fn fourier_moment_coefficients(k: u32) -> (f64, f64) {
    assert!(k >= 1, "k must be positive");
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let k2 = 4.0 * f64::from(k) * f64::from(k);
    ((sign - 1.0) / k2, PI * sign / k2)
}

/// Worst disagreement between [`fourier_moment_coefficients`] and
/// quadrature for `k = 1..=k_max`.
pub fn fourier_moment_check(k_max: u32, tol: f64) -> CheckRecord {
    let name = "fourier_moment_coefficients";
    let anchor = "logcos-fourier";
    let mut worst = (0.0f64, 0.0, 0.0);
    for k in 1..=k_max {
        let kf = f64::from(k);
        let (c1, c2) = fourier_moment_coefficients(k);
        for (w, closed) in [(Weight::T, c1), (Weight::T2, c2)] {
            match integrate_weighted(|t| (2.0 * kf * t).cos(), w, 0.0, FRAC_PI_2, &cfg()) {
                Ok(r) => {
                    let d = (r.value - closed).abs();
                    if !r.converged {
                        return CheckRecord::equality(name, anchor, r.value, closed, tol)
                            .fail_with(format!("quadrature did not converge at k = {k}"));
                    }
                    if d >= worst.0 {
                        worst = (d, r.value, closed);
                    }
                }
                Err(e) => return CheckRecord::failed(name, anchor, tol, e),
            }
        }
    }
    CheckRecord::equality(name, anchor, worst.1, worst.2, tol)
}

/// `I_ε = ∫₀ᵘ ξ²` by quadrature against the reduced right-hand side, whose
/// log-cosine pieces are also integrated numerically on `[0, u]`.
pub fn truncated_identity(epsilon: f64, tol: f64) -> CheckRecord {
    let name = format!("truncated_identity_eps_{epsilon}");
    let anchor = "appendix-Ieps-formula";
    let q = match AppendixQuantities::new(epsilon) {
        Ok(q) => q,
        Err(e) => return CheckRecord::failed(name, anchor, tol, e),
    };
    let u = q.u;
    let pieces = (|| -> Result<(f64, f64, f64, bool)> {
        let lhs = integrate(
            |t| {
                let x = xi_unchecked(t);
                x * x
            },
            0.0,
            u,
            &cfg(),
        )?;
        let l0 = integrate_weighted(log_cos, Weight::One, 0.0, u, &cfg())?;
        let l2 = integrate_weighted(log_cos, Weight::T2, 0.0, u, &cfg())?;
        let converged = lhs.converged && l0.converged && l2.converged;
        Ok((lhs.value, l0.value, l2.value, converged))
    })();
    match pieces {
        Ok((lhs, l0, l2, converged)) => {
            let rhs =
                u - 4.0 / 3.0 * u.powi(3) + q.boundary_term() + 2.0 * PI * PI / 3.0 * l0 - 8.0 * l2;
            let rec = CheckRecord::equality(name, anchor, lhs, rhs, tol);
            if converged {
                rec
            } else {
                rec.fail_with("quadrature did not converge")
            }
        }
        Err(e) => CheckRecord::failed(name, anchor, tol, e),
    }
}

/// Extrapolated `lim_{ε↓0} B_ε` against `−2π/3`.
pub fn boundary_limit(tol: f64) -> CheckRecord {
    let name = "boundary_limit";
    let anchor = "appendix-boundary-limit";
    let g = |e: f64| AppendixQuantities::new(e).map_or(f64::NAN, |q| q.boundary_term());
    match richardson_limit(g, Side::Right, 0.0) {
        Ok(x) => CheckRecord::equality(name, anchor, x.value, -2.0 * PI / 3.0, tol),
        Err(e) => CheckRecord::failed(name, anchor, tol, e),
    }
}

/// `B_ε` from the `ε`-side and `u`-side trigonometric routes.
pub fn boundary_routes_check(epsilon: f64, tol: f64) -> CheckRecord {
    let name = "boundary_term_routes";
    let anchor = "appendix-boundary";
    match AppendixQuantities::new(epsilon) {
        Ok(q) => {
            let direct: f64 = q.boundary_summands_direct().iter().sum();
            CheckRecord::equality(name, anchor, q.boundary_term(), direct, tol)
        }
        Err(e) => CheckRecord::failed(name, anchor, tol, e),
    }
}

/// `d/dt[tan t·sec²t] − (3sec⁴t − 2sec²t)`, relative to `max(1, 3sec⁴t)`,
/// with a five-point difference.
pub fn sec4_identity_residual(t: f64) -> f64 {
    let f = |s: f64| {
        let c = s.cos();
        s.tan() / (c * c)
    };
    let h = 1e-3;
    let d = (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h);
    let sec2 = 1.0 / t.cos().powi(2);
    let exact = 3.0 * sec2 * sec2 - 2.0 * sec2;
    (d - exact) / (3.0 * sec2 * sec2).max(1.0)
}

/// Worst relative [`sec4_identity_residual`] on a uniform grid of
/// `(0, 1.4)`.
pub fn sec4_identity_check(grid_size: usize, tol: f64) -> CheckRecord {
    let mut worst = 0.0f64;
    for i in 1..=grid_size {
        let t = 1.4 * i as f64 / (grid_size + 1) as f64;
        worst = worst.max(sec4_identity_residual(t).abs());
    }
    CheckRecord::equality("sec4_identity", "appendix-sec4-id", worst, 0.0, tol)
}

/// Coefficient of `log 2` after inserting the closed-form log-cosine
/// integrals into the full-interval reduction: `(2π²/3)(−π/2) − 8(−π³/24)`.
pub fn log2_coefficient() -> f64 {
    2.0 * PI * PI / 3.0 * (-FRAC_PI_2) - 8.0 * (-PI.powi(3) / 24.0)
}

/// The reduction with closed-form log-cosine integrals:
/// `π/2 − π³/6 − 2π/3 + (2π²/3)·L₀ − 8·L₂`.
pub fn reduction_closed_form() -> f64 {
    let [l0, _, l2] = log_cos_closed_forms();
    FRAC_PI_2 - PI.powi(3) / 6.0 - 2.0 * PI / 3.0 + 2.0 * PI * PI / 3.0 * l0 - 8.0 * l2
}

/// Full-interval reduction.
///
/// Passes iff (1) `∫₀^{π/2} ξ²` by quadrature matches the reduction with
/// numerically integrated log-cosine pieces within `tol`, (2) the `log 2`
/// coefficient assembled from the closed forms vanishes to `1e-12`, and
/// (3) the closed-form assembly equals `π(2ζ(3) − (π² + 1)/6)` within `tol`.
pub fn reduction_final(tol: f64) -> CheckRecord {
    let name = "reduction_final";
    let anchor = "appendix-reduction-final";
    let pieces = (|| -> Result<(f64, f64, f64, bool)> {
        let lhs = integrate(
            |t| {
                let x = xi_unchecked(t);
                x * x
            },
            0.0,
            FRAC_PI_2,
            &cfg(),
        )?;
        let l0 = integrate_weighted(log_cos, Weight::One, 0.0, FRAC_PI_2, &cfg())?;
        let l2 = integrate_weighted(log_cos, Weight::T2, 0.0, FRAC_PI_2, &cfg())?;
        Ok((
            lhs.value,
            l0.value,
            l2.value,
            lhs.converged && l0.converged && l2.converged,
        ))
    })();
    let (lhs, l0, l2, converged) = match pieces {
        Ok(p) => p,
        Err(e) => return CheckRecord::failed(name, anchor, tol, e),
    };
    let rhs = FRAC_PI_2 - PI.powi(3) / 6.0 - 2.0 * PI / 3.0 + 2.0 * PI * PI / 3.0 * l0 - 8.0 * l2;
    let mut rec = CheckRecord::equality(name, anchor, lhs, rhs, tol);
    if !converged {
        return rec.fail_with("quadrature did not converge");
    }
    let coeff = log2_coefficient();
    if coeff.abs() > 1e-12 {
        rec = rec.fail_with(format!("log 2 coefficient {coeff:e} does not vanish"));
    }
    let collapse = reduction_closed_form() - SharedConstants::get().second_moment_integral;
    if collapse.abs() > tol {
        rec = rec.fail_with(format!("closed-form assembly off by {collapse:e}"));
    }
    rec
}
