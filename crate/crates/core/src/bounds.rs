//! Lower bounds for the first Dirichlet eigenvalue λ.
//!
//! With `α = (n−1)K/2` and `D = π²/d̃²`:
//!
//! | bound    | value                                                |
//! |----------|------------------------------------------------------|
//! | Reilly   | `nK`                                                 |
//! | Ling     | `α + D`                                              |
//! | refined  | `((α + D) + √((α + D)² + V·α²)) / 2`                 |
//! | implicit | smallest admissible root of `G` (see [`implicit`])   |
//!
//! All bounds scale like `1/length²`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::check::CheckRecord;
use crate::comparison::variance_refined_factor;
use crate::constants::variance_constant;
use crate::error::{Error, Result};

/// Dimension, Ricci constant and in-diameter of a manifold with boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryInput {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    pub d_tilde: f64,
}

impl GeometryInput {
    /// Validates `n ≥ 2`, `K ≥ 0` and `d̃ > 0`. `K = 0` is accepted as the
    /// degenerate limit; [`reilly`] rejects it.
    pub fn new(n: u32, k: f64, d_tilde: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGeometry(format!(
                "dimension n must be at least 2, got {n}"
            )));
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "Ricci constant K must be finite and nonnegative, got {k}"
            )));
        }
        if !(d_tilde.is_finite() && d_tilde > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "in-diameter d_tilde must be finite and positive, got {d_tilde}"
            )));
        }
        Ok(GeometryInput { n, k, d_tilde })
    }

    pub fn derived(&self) -> DerivedParams {
        DerivedParams {
            alpha: alpha(self),
            d: diameter_term(self),
            delta_max: delta_range(self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `α = (n−1)K/2`.
    pub alpha: f64,
    /// `D = π²/d̃²`.
    pub d: f64,
    /// `(n−1)/(2n)`, the largest possible `δ = α/λ`.
    pub delta_max: f64,
}

fn alpha(g: &GeometryInput) -> f64 {
    0.5 * f64::from(g.n - 1) * g.k
}

fn diameter_term(g: &GeometryInput) -> f64 {
    (PI / g.d_tilde).powi(2)
}

/// `λ ≥ nK`. Requires `K > 0`.
pub fn reilly(g: &GeometryInput) -> Result<f64> {
    if g.k <= 0.0 {
        return Err(Error::domain("reilly", format!("needs K > 0, got {}", g.k)));
    }
    Ok(f64::from(g.n) * g.k)
}

/// `λ ≥ α + D`.
pub fn ling(g: &GeometryInput) -> f64 {
    alpha(g) + diameter_term(g)
}

/// `λ ≥ ((α + D) + √((α + D)² + V·α²)) / 2`; equals [`ling`] when `K = 0`.
pub fn refined(g: &GeometryInput) -> f64 {
    let a = alpha(g);
    let s = a + diameter_term(g);
    if a == 0.0 {
        return s;
    }
    0.5 * (s + (s * s + variance_constant() * a * a).sqrt())
}

/// `G(λ) = √λ·d̃/2 − (π/2)(1/√(1 − δ) + (3/8)V·δ²)` with `δ = α/λ`.
///
/// Strictly increasing in λ on `(α, ∞)`.
pub fn implicit_residual(g: &GeometryInput, lambda: f64) -> f64 {
    let delta = alpha(g) / lambda;
    lambda.sqrt() * 0.5 * g.d_tilde
        - FRAC_PI_2 * variance_refined_factor(delta, variance_constant())
}

/// Bound from the variance-refined integral estimate without the one-root
/// simplification.
///
/// The true eigenvalue satisfies `λ ≥ nK > 2α` and `G(λ) ≥ 0`, so the bound
/// is `inf{λ > 2α : G(λ) ≥ 0}`. Since `G` increases, that is `2α` when `G`
/// is already nonnegative just above `2α`, and otherwise the root of `G`,
/// found by bisection from `[max(2α(1 + 10⁻⁹), α + D), ·]` with geometric
/// upward expansion. The lower end of the final bracket (relative width
/// `10⁻¹²`) is returned.
pub fn implicit(g: &GeometryInput) -> Result<f64> {
    let a = alpha(g);
    let d = diameter_term(g);
    if a == 0.0 {
        return Ok(d);
    }
    let floor = 2.0 * a * (1.0 + 1e-9);
    let ling = a + d;
    let mut lo = floor.max(ling);
    if implicit_residual(g, lo) >= 0.0 {
        return Ok(if ling >= floor { ling } else { 2.0 * a });
    }
    let limit = ling * 2f64.powi(60);
    let mut hi = 2.0 * lo;
    while implicit_residual(g, hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::Solver(format!(
                "no sign change of G below 2^60·(α + D) = {limit:e}"
            )));
        }
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if implicit_residual(g, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `(n−1)/(2n)`, the upper bound on `δ = α/λ` from `λ ≥ nK`.
pub fn delta_range(n: u32) -> f64 {
    f64::from(n - 1) / (2.0 * f64::from(n))
}

/// `refined/ling = (1 + √(1 + V(α/(α+D))²)) / 2`.
pub fn ratio(g: &GeometryInput) -> f64 {
    let a = alpha(g);
    let x = a / (a + diameter_term(g));
    0.5 * (1.0 + (1.0 + variance_constant() * x * x).sqrt())
}

/// Supremum of [`ratio`], `(1 + √(1 + V))/2`, approached as `D/α → 0`.
pub fn ratio_cap() -> f64 {
    0.5 * (1.0 + (1.0 + variance_constant()).sqrt())
}

/// Geodesic hemisphere of the round sphere with `Ric = (n−1)K`:
/// `d̃ = π/√K`, so `D = K`.
pub fn hemisphere_input(n: u32, k: f64) -> Result<GeometryInput> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidGeometry(format!(
            "hemisphere needs K > 0, got {k}"
        )));
    }
    GeometryInput::new(n, k, PI / k.sqrt())
}

/// `1/√(1−δ) + (3/8)Vδ² − 1/√(1 − δ − (V/4)δ²)`.
pub fn one_root_slack(delta: f64) -> f64 {
    let v = variance_constant();
    variance_refined_factor(delta, v) - 1.0 / (1.0 - delta - 0.25 * v * delta * delta).sqrt()
}

/// The one-root inequality and the uniform bound
/// `(1 − δ − (V/4)δ²)^{−3/2} ≤ 3` on a closed grid of `δ ∈ [0, 1/2]`.
///
/// Returns one record for each; both store their worst slack.
pub fn one_root_check(grid_size: usize, tol: f64) -> Result<[CheckRecord; 2]> {
    if grid_size < 2 {
        return Err(Error::domain(
            "one_root_check",
            "grid_size must be at least 2",
        ));
    }
    let v = variance_constant();
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    let mut worst_power = (f64::INFINITY, 0.0);
    for i in 0..grid_size {
        let delta = 0.5 * i as f64 / (grid_size - 1) as f64;
        let lhs = variance_refined_factor(delta, v);
        let inner = 1.0 - delta - 0.25 * v * delta * delta;
        let rhs = 1.0 / inner.sqrt();
        if lhs - rhs < worst.0 {
            worst = (lhs - rhs, lhs, rhs);
        }
        let power = inner.powf(-1.5);
        if 3.0 - power < worst_power.0 {
            worst_power = (3.0 - power, power);
        }
    }
    Ok([
        CheckRecord::inequality("one_root", "one-root", worst.1, worst.2, worst.0, tol),
        CheckRecord::inequality(
            "one_root_power_bound",
            "one-root",
            worst_power.1,
            3.0,
            worst_power.0,
            tol,
        ),
    ])
}

/// All bounds for one geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// `None` when `K = 0`.
    pub reilly: Option<f64>,
    pub ling: f64,
    pub refined: f64,
    pub implicit: f64,
    pub best: f64,
    pub ratio_refined_over_ling: f64,
}

pub fn bound_report(g: &GeometryInput) -> Result<BoundReport> {
    let reilly = if g.k > 0.0 { Some(reilly(g)?) } else { None };
    let ling = ling(g);
    let refined = refined(g);
    let implicit = implicit(g)?;
    let best = [reilly.unwrap_or(f64::NEG_INFINITY), ling, refined, implicit]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    let report = BoundReport {
        reilly,
        ling,
        refined,
        implicit,
        best,
        ratio_refined_over_ling: ratio(g),
    };
    let slack = 1e-12 * best.abs().max(1.0);
    if refined < ling - slack || implicit < refined - slack {
        return Err(Error::Solver(format!(
            "bound ordering violated: ling {ling}, refined {refined}, implicit {implicit}"
        )));
    }
    if g.k > 0.0
        && !(report.ratio_refined_over_ling > 1.0 && report.ratio_refined_over_ling <= ratio_cap())
    {
        return Err(Error::Solver(format!(
            "ratio {} outside (1, {}]",
            report.ratio_refined_over_ling,
            ratio_cap()
        )));
    }
    Ok(report)
}
