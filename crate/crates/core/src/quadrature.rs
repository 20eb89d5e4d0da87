//! Double-exponential (tanh-sinh) quadrature and one-sided limit
//! extrapolation.
//!
//! The substitution `x = c + h·tanh(π/2·sinh t)` sends the endpoints of
//! `[a, b]` to `±∞` with doubly-exponentially decaying weights, so integrands
//! that are smooth inside and at worst logarithmically singular at the
//! endpoints converge at the same rate as smooth ones. Node abscissae near an
//! endpoint are formed from the endpoint distance directly, never as
//! `c ± h·tanh(..)`, which would round onto the endpoint.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Past this value of `π/2·sinh t` every weight is below `e^{-700}`.
const MAX_EXPONENT: f64 = 350.0;

/// Levels before the successive-difference test is trusted.
const MIN_LEVELS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_levels: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_levels: 12,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain(
                "integrate",
                "rel_tol and abs_tol must be positive",
            ));
        }
        if self.max_levels < 1 {
            return Err(Error::domain("integrate", "max_levels must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Polynomial weights for [`integrate_weighted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    T,
    T2,
}

impl Weight {
    fn apply(self, t: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::T => t,
            Weight::T2 => t * t,
        }
    }
}

/// Integrates `f` over `[a, b]` by tanh-sinh quadrature.
///
/// Each level halves the step in the transformed variable and only evaluates
/// the new (odd) nodes. The error estimate is the difference between the two
/// finest levels; `converged` is set once it drops below
/// `max(abs_tol, rel_tol·|value|)`. Running out of levels is not an error:
/// the best estimate comes back with `converged = false`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(
            "integrate",
            format!("need finite a < b, got a = {a}, b = {b}"),
        ));
    }

    let half = 0.5 * (b - a);
    let mid = a + half;
    let evaluations = Cell::new(0usize);

    let eval = |x: f64| -> Result<f64> {
        evaluations.set(evaluations.get() + 1);
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteSample { x, value: y })
        }
    };

    // Weighted contribution of the symmetric node pair at parameter t > 0.
    let pair = |t: f64| -> Result<Option<f64>> {
        let y = FRAC_PI_2 * t.sinh();
        if y > MAX_EXPONENT {
            return Ok(None);
        }
        let cosh_y = y.cosh();
        let dist = half / (y.exp() * cosh_y);
        let w = half * FRAC_PI_2 * t.cosh() / (cosh_y * cosh_y);
        let mut s = 0.0;
        let xl = a + dist;
        if xl > a {
            s += eval(xl)?;
        }
        let xr = b - dist;
        if xr < b {
            s += eval(xr)?;
        }
        Ok(Some(w * s))
    };

    // Level 0: step 1, nodes at every integer t.
    let mut sum = half * FRAC_PI_2 * eval(mid)?;
    let mut k = 1u32;
    while let Some(c) = pair(k as f64)? {
        sum += c;
        k += 1;
    }
    let mut h = 1.0;
    let mut estimate = h * sum;
    let mut error_estimate = f64::INFINITY;

    for level in 1..=cfg.max_levels {
        h *= 0.5;
        let mut j = 1u64;
        loop {
            let t = j as f64 * h;
            match pair(t)? {
                Some(c) => sum += c,
                None => break,
            }
            j += 2;
        }
        let next = h * sum;
        error_estimate = (next - estimate).abs();
        estimate = next;
        let tol = cfg.abs_tol.max(cfg.rel_tol * estimate.abs());
        if level >= MIN_LEVELS && error_estimate <= tol {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate,
                evaluations: evaluations.get(),
                converged: true,
            });
        }
    }

    Ok(QuadratureResult {
        value: estimate,
        error_estimate,
        evaluations: evaluations.get(),
        converged: false,
    })
}

/// [`integrate`] applied to `weight(t)·f(t)`.
pub fn integrate_weighted<F>(
    f: F,
    weight: Weight,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    integrate(|t| weight.apply(t) * f(t), a, b, cfg)
}

/// Side from which a limit is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolationConfig {
    /// Largest offset from the limit point.
    pub initial_offset: f64,
    /// Ratio between consecutive offsets, in `(0, 1)`.
    pub ratio: f64,
    /// Number of samples.
    pub samples: usize,
    /// Largest number of basis functions in one fit.
    pub max_terms: usize,
    /// Relative error estimate above which the limit is declared divergent.
    pub divergence_threshold: f64,
}

impl Default for ExtrapolationConfig {
    fn default() -> Self {
        ExtrapolationConfig {
            initial_offset: 0.1,
            ratio: 0.5,
            samples: 16,
            max_terms: 8,
            divergence_threshold: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of basis functions in the selected fit.
    pub terms: usize,
}

/// One-sided limit of `g` at `at` with the default configuration.
pub fn richardson_limit<G>(g: G, side: Side, at: f64) -> Result<Extrapolation>
where
    G: Fn(f64) -> f64,
{
    richardson_limit_with(g, side, at, &ExtrapolationConfig::default())
}

/// One-sided limit by generalised Richardson extrapolation.
///
/// `g` is sampled at offsets `x_k = x_0·q^k` from `at`. Every window of `m`
/// consecutive samples is fitted exactly by the first `m` functions of
/// `1, x·log x, x, x²·log x, x², …`, whose constant coefficient is a
/// limit estimate. Plain power series are the special case with vanishing
/// log coefficients. The estimate whose change from the neighbouring window
/// is smallest wins, and that change is reported as its error.
pub fn richardson_limit_with<G>(
    g: G,
    side: Side,
    at: f64,
    cfg: &ExtrapolationConfig,
) -> Result<Extrapolation>
where
    G: Fn(f64) -> f64,
{
    if !(cfg.initial_offset > 0.0 && cfg.ratio > 0.0 && cfg.ratio < 1.0) {
        return Err(Error::domain(
            "richardson_limit",
            "need initial_offset > 0 and 0 < ratio < 1",
        ));
    }
    if cfg.samples < 3 || cfg.max_terms < 1 {
        return Err(Error::domain(
            "richardson_limit",
            "need at least 3 samples and 1 term",
        ));
    }

    let offsets: Vec<f64> = (0..cfg.samples)
        .map(|k| cfg.initial_offset * cfg.ratio.powi(k as i32))
        .collect();
    let mut values = Vec::with_capacity(offsets.len());
    for &x in &offsets {
        let point = match side {
            Side::Left => at - x,
            Side::Right => at + x,
        };
        let y = g(point);
        if !y.is_finite() {
            return Err(Error::Divergence(format!(
                "sample at offset {x:e} is not finite ({y})"
            )));
        }
        values.push(y);
    }

    let mut best: Option<Extrapolation> = None;
    let max_terms = cfg.max_terms.min(cfg.samples - 1);
    for m in 1..=max_terms {
        let mut prev: Option<f64> = None;
        for start in 0..=(cfg.samples - m) {
            let window = &offsets[start..start + m];
            let Some(est) = fit_constant(window, &values[start..start + m]) else {
                prev = None;
                continue;
            };
            if let Some(p) = prev {
                let err = (est - p).abs();
                if best.is_none_or(|b| err < b.error_estimate) {
                    best = Some(Extrapolation {
                        value: est,
                        error_estimate: err,
                        terms: m,
                    });
                }
            }
            prev = Some(est);
        }
    }

    let best = best.ok_or_else(|| Error::Divergence("no admissible fit".into()))?;
    if best.error_estimate > cfg.divergence_threshold * best.value.abs().max(1.0) {
        return Err(Error::Divergence(format!(
            "best estimate {} has error {:e}",
            best.value, best.error_estimate
        )));
    }
    Ok(best)
}

/// Constant coefficient of the exact fit of `ys` by the first `xs.len()`
/// basis functions. Offsets are rescaled by the first one; the span of the
/// basis is invariant under that rescaling.
fn fit_constant(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let m = xs.len();
    let scale = xs[0];
    let mut mat: Vec<Vec<f64>> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let s = x / scale;
            let mut row: Vec<f64> = (0..m).map(|j| basis(s, j)).collect();
            row.push(y);
            row
        })
        .collect();
    solve_in_place(&mut mat).map(|sol| sol[0])
}

fn basis(x: f64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let power = j.div_ceil(2) as i32;
    let p = x.powi(power);
    if j % 2 == 1 {
        p * x.ln()
    } else {
        p
    }
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_in_place(mat: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))?;
        if mat[pivot][col] == 0.0 || !mat[pivot][col].is_finite() {
            return None;
        }
        mat.swap(col, pivot);
        let (upper, lower) = mat.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
        }
    }
    let mut sol = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = mat[row][n];
        for k in row + 1..n {
            acc -= mat[row][k] * sol[k];
        }
        sol[row] = acc / mat[row][row];
    }
    sol.iter().all(|v| v.is_finite()).then_some(sol)
}
