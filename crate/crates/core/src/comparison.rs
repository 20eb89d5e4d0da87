//! The one-dimensional comparison apparatus: the auxiliary function
//!
//! ```text
//! ξ(t) = (cos²t + 2t·sin t·cos t + t² − π²/4) / cos²t,   t ∈ [−π/2, π/2],
//! ```
//!
//! the profile `z(t) = 1 + δ·ξ(t)`, their moments under `(2/π)dt` on
//! `[0, π/2]`, and the Jensen and strong-convexity lower bounds for
//! `∫ z^{−1/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::check::CheckRecord;
use crate::constants::{variance_constant, SharedConstants};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// Evaluator for ξ with a series branch near `±π/2`, where the closed form
/// degenerates to `0/0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiEvaluator {
    switch_threshold: f64,
}

impl Default for XiEvaluator {
    fn default() -> Self {
        XiEvaluator {
            switch_threshold: 1e-4,
        }
    }
}

impl XiEvaluator {
    pub fn new(switch_threshold: f64) -> Result<Self> {
        if !(switch_threshold > 0.0 && switch_threshold < PI / 4.0) {
            return Err(Error::domain(
                "XiEvaluator::new",
                format!("switch_threshold must lie in (0, π/4), got {switch_threshold}"),
            ));
        }
        Ok(XiEvaluator { switch_threshold })
    }

    pub fn switch_threshold(&self) -> f64 {
        self.switch_threshold
    }

    /// ξ(t). Even in `t` by construction.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let s = t.abs();
        if s.is_nan() || s > FRAC_PI_2 {
            return Err(Error::domain(
                "xi",
                format!("|t| must be at most π/2, got {t}"),
            ));
        }
        let h = FRAC_PI_2 - s;
        if h < self.switch_threshold {
            Ok(xi_endpoint_series(h))
        } else {
            Ok(xi_closed_form(s, h))
        }
    }
}

/// Closed form in terms of `h = π/2 − t`: `cos t = sin h`, `sin t = cos h`
/// and `t² − π²/4 = −h(t + π/2)`.
fn xi_closed_form(t: f64, h: f64) -> f64 {
    let (sh, ch) = h.sin_cos();
    let num = sh * sh + 2.0 * t * sh * ch - h * (t + FRAC_PI_2);
    num / (sh * sh)
}

/// `ξ(π/2 − h) = −(2π/3)h + h² − (4π/45)h³ + h⁴/9 − (4π/315)h⁵ + O(h⁶)`.
pub fn xi_endpoint_series(h: f64) -> f64 {
    let c1 = -2.0 * PI / 3.0;
    let c3 = -4.0 * PI / 45.0;
    let c5 = -4.0 * PI / 315.0;
    h * (c1 + h * (1.0 + h * (c3 + h * (1.0 / 9.0 + h * c5))))
}

/// ξ(t) with the default evaluator.
pub fn xi(t: f64) -> Result<f64> {
    XiEvaluator::default().eval(t)
}

/// Unchecked ξ for quadrature callbacks on `[0, π/2]`.
pub(crate) fn xi_unchecked(t: f64) -> f64 {
    let h = FRAC_PI_2 - t.abs();
    if h < 1e-4 {
        xi_endpoint_series(h)
    } else {
        xi_closed_form(t.abs(), h)
    }
}

/// `I(t) = ∫_t^{π/2} s·cos²s ds`.
///
/// With `F(s) = s²/4 + s·sin(2s)/4 + cos(2s)/8`, `I(t) = F(π/2) − F(t)`. It
/// is evaluated here in the shifted variable `h = π/2 − t`, where the same
/// antiderivative reads
/// `(π/2)(h/2 − sin(2h)/4) − (h²/4 − h·sin(2h)/4 + sin²h/4)`,
/// so that no `O(1)` terms cancel near the endpoint.
pub fn tail_moment(t: f64) -> f64 {
    let h = FRAC_PI_2 - t;
    let s2 = (2.0 * h).sin();
    let sh = h.sin();
    FRAC_PI_2 * (0.5 * h - 0.25 * s2) - (0.25 * h * h - 0.25 * h * s2 + 0.25 * sh * sh)
}

/// `ξ(t) = −4·sec²t·∫_t^{π/2} s·cos²s ds` for `0 ≤ t < π/2`.
pub fn xi_integral_form(t: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&t) {
        return Err(Error::domain(
            "xi_integral_form",
            format!("need 0 ≤ t < π/2, got {t}"),
        ));
    }
    let c = (FRAC_PI_2 - t).sin();
    Ok(-4.0 * tail_moment(t) / (c * c))
}

/// `d/dt[ξ(t)cos²t] − 4t·cos²t` by a central difference of `ξ·cos²`.
pub fn xi_first_order_residual(t: f64) -> Result<f64> {
    if t.is_nan() || t.abs() >= FRAC_PI_2 {
        return Err(Error::domain(
            "xi_first_order_residual",
            format!("need |t| < π/2, got {t}"),
        ));
    }
    let step = 1e-5f64.min(0.5 * (FRAC_PI_2 - t.abs()));
    let g = |s: f64| -> f64 {
        let c = s.cos();
        xi_unchecked(s) * c * c
    };
    let derivative = (g(t + step) - g(t - step)) / (2.0 * step);
    let c = t.cos();
    Ok(derivative - 4.0 * t * c * c)
}

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let r = integrate(f, a, b, &QuadratureConfig::default())?;
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::Solver(format!(
            "quadrature did not converge (estimate {}, error {:e})",
            r.value, r.error_estimate
        )))
    }
}

fn quad_record(
    name: &str,
    anchor: &str,
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rhs: f64,
    tol: f64,
) -> CheckRecord {
    match integrate(f, a, b, &QuadratureConfig::default()) {
        Ok(r) => {
            let rec = CheckRecord::equality(name, anchor, r.value, rhs, tol);
            if r.converged {
                rec
            } else {
                rec.fail_with(format!(
                    "quadrature did not converge (error estimate {:e})",
                    r.error_estimate
                ))
            }
        }
        Err(e) => CheckRecord::failed(name, anchor, tol, e),
    }
}

/// `∫₀^{π/2} ξ dt` against `−π/2`.
pub fn xi_mean(tol: f64) -> CheckRecord {
    quad_record(
        "xi_mean",
        "xi-mean",
        xi_unchecked,
        0.0,
        FRAC_PI_2,
        -FRAC_PI_2,
        tol,
    )
}

/// Normalised mean `(2/π)∫₀^{π/2} ξ dt` against `−1`.
pub fn xi_normalized_mean(tol: f64) -> CheckRecord {
    let mut rec = quad_record(
        "xi_normalized_mean",
        "xi-mean",
        xi_unchecked,
        0.0,
        FRAC_PI_2,
        -FRAC_PI_2,
        tol,
    );
    rec.lhs *= 2.0 / PI;
    rec.rhs = -1.0;
    rec.abs_discrepancy = (rec.lhs - rec.rhs).abs();
    if rec.error.is_none() {
        rec.pass = rec.abs_discrepancy <= tol;
    }
    rec
}

/// The Fubini route: `−4∫₀^{π/2} s·sin s·cos s ds = −π/2`.
pub fn xi_mean_fubini(tol: f64) -> CheckRecord {
    quad_record(
        "xi_mean_fubini",
        "xi-mean",
        |s: f64| -4.0 * s * s.sin() * s.cos(),
        0.0,
        FRAC_PI_2,
        -FRAC_PI_2,
        tol,
    )
}

/// Outcome of [`xi_range_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSummary {
    pub min_xi: f64,
    pub max_xi: f64,
    pub min_f: f64,
    pub record: CheckRecord,
}

/// Checks `−2 ≤ ξ ≤ 0` and `F(t) = cos²t/2 − I(t) ≥ 0` on a closed uniform
/// grid of `[0, π/2]`. The stored discrepancy is the worst slack.
pub fn xi_range_check(grid_size: usize, tol: f64) -> Result<RangeSummary> {
    if grid_size < 2 {
        return Err(Error::domain(
            "xi_range_check",
            "grid_size must be at least 2",
        ));
    }
    let step = FRAC_PI_2 / (grid_size - 1) as f64;
    let mut min_xi = f64::INFINITY;
    let mut max_xi = f64::NEG_INFINITY;
    let mut min_f = f64::INFINITY;
    for i in 0..grid_size {
        let t = if i == grid_size - 1 {
            FRAC_PI_2
        } else {
            i as f64 * step
        };
        let v = xi_unchecked(t);
        min_xi = min_xi.min(v);
        max_xi = max_xi.max(v);
        let c = (FRAC_PI_2 - t).sin();
        min_f = min_f.min(0.5 * c * c - tail_moment(t));
    }
    let slack = (min_xi + 2.0).min(-max_xi).min(min_f);
    let record = CheckRecord::inequality("xi_range", "xi-range", min_xi, max_xi, slack, tol);
    Ok(RangeSummary {
        min_xi,
        max_xi,
        min_f,
        record,
    })
}

/// `∫₀^{π/2} ξ² dt` against `π(2ζ(3) − (π² + 1)/6)`.
pub fn xi_second_moment(tol: f64) -> CheckRecord {
    let closed = SharedConstants::get().second_moment_integral;
    quad_record(
        "xi_second_moment",
        "xi-square-integral",
        |t| {
            let x = xi_unchecked(t);
            x * x
        },
        0.0,
        FRAC_PI_2,
        closed,
        tol,
    )
}

/// The profile `z(t) = 1 + δ·ξ(t)` for an admissible ratio `δ ∈ [0, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZFunction {
    delta: f64,
}

impl ZFunction {
    pub fn new(delta: f64) -> Result<Self> {
        check_delta("ZFunction::new", delta, 0.5)?;
        Ok(ZFunction { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, t: f64) -> f64 {
        1.0 + self.delta * xi_unchecked(t)
    }

    /// `μ = (2/π)∫₀^{π/2} z dt`, by quadrature.
    pub fn mean(&self) -> Result<f64> {
        Ok(2.0 / PI * quad(|t| self.eval(t), 0.0, FRAC_PI_2)?)
    }

    /// `Var(z) = (2/π)∫₀^{π/2} (z − μ)² dt`, by quadrature with the
    /// quadrature mean.
    pub fn variance(&self) -> Result<f64> {
        let mu = self.mean()?;
        Ok(2.0 / PI
            * quad(
                |t| {
                    let d = self.eval(t) - mu;
                    d * d
                },
                0.0,
                FRAC_PI_2,
            )?)
    }
}

fn check_delta(op: &'static str, delta: f64, upper: f64) -> Result<()> {
    if (0.0..upper).contains(&delta) {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("δ must lie in [0, {upper}), got {delta}"),
        ))
    }
}

/// `∫₀^{π/2} z(t)^{−1/2} dt` with `z = 1 + δξ`.
pub fn inv_sqrt_z_integral(delta: f64) -> Result<f64> {
    let z = ZFunction::new(delta)?;
    quad(|t| 1.0 / z.eval(t).sqrt(), 0.0, FRAC_PI_2)
}

/// Jensen lower bound `(π/2)(1 − δ)^{−1/2}`, valid for `0 ≤ δ < 1`.
pub fn jensen_baseline(delta: f64) -> Result<f64> {
    check_delta("jensen_baseline", delta, 1.0)?;
    Ok(FRAC_PI_2 / (1.0 - delta).sqrt())
}

/// `1/√(1 − δ) + (3/8)·V·δ²` without range checks.
pub(crate) fn variance_refined_factor(delta: f64, v: f64) -> f64 {
    1.0 / (1.0 - delta).sqrt() + 0.375 * v * delta * delta
}

/// Strong-convexity lower bound `(π/2)(1/√(1 − δ) + (3/8)·V·δ²)`.
pub fn variance_refined_rhs(delta: f64) -> Result<f64> {
    check_delta("variance_refined_rhs", delta, 0.5)?;
    Ok(FRAC_PI_2 * variance_refined_factor(delta, variance_constant()))
}

/// Checks the quadratic minorant
/// `x^{−1/2} ≥ μ^{−1/2} − μ^{−3/2}(x − μ)/2 + (3/8)(x − μ)²`
/// at every sample, with `μ` the sample mean.
pub fn strong_convexity_check(samples: &[f64], tol: f64) -> Result<CheckRecord> {
    if samples.is_empty() {
        return Err(Error::domain("strong_convexity_check", "no samples"));
    }
    if let Some(&bad) = samples.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::domain(
            "strong_convexity_check",
            format!("samples must lie in (0, 1], got {bad}"),
        ));
    }
    let mu = samples.iter().sum::<f64>() / samples.len() as f64;
    let f_mu = 1.0 / mu.sqrt();
    let df_mu = -0.5 * f_mu / mu;
    let mut worst = f64::INFINITY;
    let mut worst_lhs = f64::NAN;
    let mut worst_rhs = f64::NAN;
    for &x in samples {
        let lhs = 1.0 / x.sqrt();
        let d = x - mu;
        let rhs = f_mu + df_mu * d + 0.375 * d * d;
        if lhs - rhs < worst {
            worst = lhs - rhs;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
    }
    Ok(CheckRecord::inequality(
        "strong_convexity",
        "variance-ineq",
        worst_lhs,
        worst_rhs,
        worst,
        tol,
    ))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_and_origin_values() {
        assert_eq!(xi(FRAC_PI_2).unwrap(), 0.0);
        assert_eq!(xi(-FRAC_PI_2).unwrap(), 0.0);
        assert!((xi(0.0).unwrap() - (1.0 - PI * PI / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn quarter_point_matches_closed_form() {
        // 2(1/2 + π/4 − 3π²/16), mpmath: −1.1303053236136128628
        let expected = -1.130_305_323_613_612_9;
        assert!((xi(PI / 4.0).unwrap() - expected).abs() < 1e-14);
        assert!((xi_integral_form(PI / 4.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(xi(1.6).is_err());
        assert!(xi(f64::NAN).is_err());
        assert!(xi_integral_form(FRAC_PI_2).is_err());
        assert!(xi_integral_form(-0.1).is_err());
        assert!(XiEvaluator::new(0.0).is_err());
        assert!(XiEvaluator::new(1.0).is_err());
        assert!(ZFunction::new(0.5).is_err());
        assert!(jensen_baseline(1.0).is_err());
        assert!(variance_refined_rhs(-0.1).is_err());
        assert!(strong_convexity_check(&[0.5, 1.5], 1e-12).is_err());
        assert!(strong_convexity_check(&[0.0], 1e-12).is_err());
    }

    #[test]
    fn series_matches_closed_form_near_endpoint() {
        // 50-digit values of ξ(π/2 − h).
        let cases = [
            (1e-2, -0.020_844_229_169_475_725),
            (1e-3, -0.002_093_395_381_534_804_6),
        ];
        for (h, expected) in cases {
            let s = xi_endpoint_series(h);
            let c = xi_closed_form(FRAC_PI_2 - h, h);
            assert!((s - expected).abs() < 1e-13, "series at {h}: {s}");
            assert!((c - expected).abs() < 1e-13, "closed at {h}: {c}");
        }
    }

    #[test]
    fn integral_form_near_endpoint() {
        let h = 1e-3;
        let v = xi_integral_form(FRAC_PI_2 - h).unwrap();
        assert!((v - (-0.002_093_395_381_534_804_6)).abs() < 1e-12);
        assert!((v + 2.0 * PI / 3.0 * h).abs() < 2e-6);
    }

    #[test]
    fn evenness_is_exact() {
        for &t in &[0.1, 0.7, 1.3, FRAC_PI_2 - 1e-4] {
            assert_eq!(xi(t).unwrap(), xi(-t).unwrap());
        }
    }

    #[test]
    fn first_order_residual_small() {
        for &t in &[0.0, 1.0, PI / 4.0, 1.5] {
            assert!(xi_first_order_residual(t).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn mean_records_pass() {
        assert!(xi_mean(1e-10).pass);
        assert!(xi_normalized_mean(1e-10).pass);
        assert!(xi_mean_fubini(1e-10).pass);
        assert!(!xi_mean(1e-30).pass);
    }

    #[test]
    fn range_with_endpoints_only() {
        let r = xi_range_check(2, 1e-12).unwrap();
        assert!(r.record.pass);
        assert!((r.min_xi - (1.0 - PI * PI / 4.0)).abs() < 1e-15);
        assert_eq!(r.max_xi, 0.0);
        assert!(xi_range_check(1, 1e-12).is_err());
    }

    #[test]
    fn tail_moment_at_origin() {
        // F(0) = 1/2 − (π²/16 − 1/4)
        let f0 = 0.5 - tail_moment(0.0);
        assert!((f0 - 0.133_149_724_931_915_09).abs() < 1e-15);
    }

    #[test]
    fn second_moment_record_passes() {
        let r = xi_second_moment(1e-9);
        assert!(r.pass, "{r:?}");
        assert!((r.lhs - 1.861_434_716_677_888_9).abs() < 1e-12);
    }

    #[test]
    fn jensen_values() {
        assert_eq!(jensen_baseline(0.0).unwrap(), FRAC_PI_2);
        assert!((jensen_baseline(0.5).unwrap() - FRAC_PI_2 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn variance_refined_values() {
        assert_eq!(variance_refined_rhs(0.0).unwrap(), FRAC_PI_2);
        // mpmath: 2.1401316876975100712
        assert!((variance_refined_rhs(0.45).unwrap() - 2.140_131_687_697_510).abs() < 1e-12);
    }

    #[test]
    fn inverse_root_integral_values() {
        assert!((inv_sqrt_z_integral(0.0).unwrap() - FRAC_PI_2).abs() < 1e-14);
        // mpmath: 1.8269981909289543620, 2.2110373538013584057
        assert!((inv_sqrt_z_integral(0.25).unwrap() - 1.826_998_190_928_954_4).abs() < 1e-11);
        assert!((inv_sqrt_z_integral(0.45).unwrap() - 2.211_037_353_801_358_4).abs() < 1e-11);
    }

    #[test]
    fn strong_convexity_examples() {
        let r = strong_convexity_check(&[0.3], 1e-12).unwrap();
        assert!(r.pass);
        assert!(r.abs_discrepancy.abs() < 1e-15);

        let r = strong_convexity_check(&[1.0, 0.25, 0.5, 0.9], 1e-12).unwrap();
        assert!(r.pass && r.abs_discrepancy >= 0.0);

        // x = 1, μ = 1/2: √2 − √2/2 + 3/32 = 0.80085678...
        let mu: f64 = 0.5;
        let rhs = mu.powf(-0.5) - 0.5 * mu.powf(-1.5) * 0.5 + 0.375 * 0.25;
        assert!((rhs - 0.800_856_781_186_547_5).abs() < 1e-15);
    }

    #[test]
    fn z_mean_is_one_minus_delta() {
        let z = ZFunction::new(0.3).unwrap();
        assert!((z.mean().unwrap() - 0.7).abs() < 1e-10);
    }
}
