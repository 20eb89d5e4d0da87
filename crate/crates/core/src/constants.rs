//! ζ(3), the variance constant `V = 4ζ(3) − (π² + 4)/3`, and the exact
//! rational certificates that bound `V` from above.
//!
//! ζ(3) is summed at runtime rather than hard-coded so that the bracket
//! checks below actually exercise the value every other module consumes.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Apéry's constant to double precision, kept only as a regression reference.
pub const APERY_REFERENCE: f64 = 1.202_056_903_159_594_2;

/// Reference decimal value of `V`.
pub const VARIANCE_REFERENCE: f64 = 0.185_026_145_6;

/// Number of terms summed by [`zeta3`]. With the integral-test bracket
/// `1/(2(N+1)²) < ζ(3) − S_N < 1/(2N²)` the bracket width is below `1/N³`.
const ZETA3_TERMS: u64 = 100_000;

/// `Σ_{m=1}^{n} m⁻³`, summed from the smallest term up with compensation.
pub fn zeta3_partial_sum(n: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for m in (1..=n).rev() {
        let mf = m as f64;
        let term = 1.0 / (mf * mf * mf);
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Integral-test bracket `(S_N + 1/(2(N+1)²), S_N + 1/(2N²))` for ζ(3).
pub fn zeta3_bracket(n: u64) -> (f64, f64) {
    assert!(n >= 1, "bracket needs at least one term");
    let s = zeta3_partial_sum(n);
    let nf = n as f64;
    (s + 0.5 / ((nf + 1.0) * (nf + 1.0)), s + 0.5 / (nf * nf))
}

/// Apéry's constant ζ(3), the midpoint of the integral-test bracket at
/// `N = 10⁵` (bracket width `< 10⁻¹⁵`).
pub fn zeta3() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let (lo, hi) = zeta3_bracket(ZETA3_TERMS);
        0.5 * (lo + hi)
    })
}

/// `Σ (−1)^{k+1} k⁻³`, truncated once the first omitted term is below
/// `1e-17` (alternating-series bound) and summed smallest term first.
pub fn alternating_zeta3() -> f64 {
    // (k+1)^-3 < 1e-17  <=>  k+1 > 1e17^(1/3) ≈ 464159
    let last = 464_160u64;
    let mut sum = 0.0;
    for k in (1..=last).rev() {
        let kf = k as f64;
        let term = 1.0 / (kf * kf * kf);
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `V = 4ζ(3) − (π² + 4)/3`, the variance of ξ under `(2/π)dt`.
pub fn variance_constant() -> f64 {
    4.0 * zeta3() - (PI * PI + 4.0) / 3.0
}

/// Constants shared by the comparison and bound modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedConstants {
    pub zeta3: f64,
    pub log2: f64,
    pub pi: f64,
    /// `V`.
    pub variance: f64,
    /// `∫₀^{π/2} ξ² dt = π(2ζ(3) − (π² + 1)/6)`.
    pub second_moment_integral: f64,
    /// `E[ξ²] = (2/π)·∫₀^{π/2} ξ² dt`.
    pub e_xi_sq: f64,
}

impl SharedConstants {
    pub fn get() -> &'static SharedConstants {
        static CELL: OnceLock<SharedConstants> = OnceLock::new();
        CELL.get_or_init(|| {
            let z = zeta3();
            let second = PI * (2.0 * z - (PI * PI + 1.0) / 6.0);
            SharedConstants {
                zeta3: z,
                log2: LN_2,
                pi: PI,
                variance: variance_constant(),
                second_moment_integral: second,
                e_xi_sq: 2.0 / PI * second,
            }
        })
    }
}

/// Relation asserted by a [`RationalCertificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    Greater,
    Equal,
}

impl Relation {
    fn holds(self, ord: Ordering) -> bool {
        matches!(
            (self, ord),
            (Relation::Less, Ordering::Less)
                | (Relation::Greater, Ordering::Greater)
                | (Relation::Equal, Ordering::Equal)
        )
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Less => "<",
            Relation::Greater => ">",
            Relation::Equal => "=",
        })
    }
}

/// One step of the exact-arithmetic chain proving `V < 1/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCertificate {
    pub name: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub relation: Relation,
    pub holds: bool,
}

impl RationalCertificate {
    fn new(name: &str, lhs: BigRational, relation: Relation, rhs: BigRational) -> Self {
        let holds = relation.holds(lhs.cmp(&rhs));
        RationalCertificate {
            name: name.to_owned(),
            lhs,
            rhs,
            relation,
            holds,
        }
    }
}

impl fmt::Display for RationalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.name,
            self.lhs,
            self.relation,
            self.rhs,
            if self.holds { "holds" } else { "FAILS" }
        )
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The rational inequalities behind `V < 1/4` and
/// `(1/2 − V/16)^{−3/2} < 3`, each decided in exact arithmetic.
pub fn rational_certificates() -> Vec<RationalCertificate> {
    use Relation::*;

    let partial: BigRational = (1..=5i64)
        .map(|m| q(1, m * m * m))
        .fold(BigRational::zero(), |acc, t| acc + t);
    let zeta_upper = partial + q(1, 50);

    let pi_lower = q(223, 71);
    let pi_sq_lower = &pi_lower * &pi_lower;
    let pi_term = (q(493, 50) + q(4, 1)) / q(3, 1);

    let four_zeta_upper = q(4, 1) * q(260_423, 216_000);
    let v_upper = q(260_423, 54_000) - q(231, 50);

    let ratio = q(64, 31);
    let cube = &ratio * &ratio * &ratio;

    vec![
        RationalCertificate::new(
            "zeta3_integral_test_upper",
            zeta_upper,
            Equal,
            q(260_423, 216_000),
        ),
        RationalCertificate::new(
            "four_zeta3_upper",
            four_zeta_upper,
            Equal,
            q(260_423, 54_000),
        ),
        RationalCertificate::new(
            "pi_lower_squared",
            pi_sq_lower.clone(),
            Equal,
            q(49_729, 5_041),
        ),
        RationalCertificate::new("pi_squared_lower", pi_sq_lower, Greater, q(493, 50)),
        RationalCertificate::new("pi_term_lower", pi_term, Equal, q(231, 50)),
        RationalCertificate::new("variance_upper", v_upper.clone(), Equal, q(10_943, 54_000)),
        RationalCertificate::new("variance_below_quarter", v_upper, Less, q(1, 4)),
        RationalCertificate::new("uniform_floor", q(1, 2) - q(1, 64), Equal, q(31, 64)),
        RationalCertificate::new("ratio_cubed", cube.clone(), Equal, q(262_144, 29_791)),
        RationalCertificate::new("ratio_cubed_below_nine", cube, Less, q(9, 1)),
        RationalCertificate::new(
            "nine_times_denominator",
            q(9 * 29_791, 1),
            Greater,
            q(262_144, 1),
        ),
    ]
}

/// Checks that the runtime constants sit inside the certified brackets:
/// ζ(3) below the integral-test bound, π above 223/71, and the resulting
/// `V` below 1/4. All certificates must hold as well.
pub fn variance_below_quarter_certified() -> bool {
    let certs_ok = rational_certificates().iter().all(|c| c.holds);
    let zeta_ok = zeta3() < 260_423.0 / 216_000.0;
    let pi_ok = PI > 223.0 / 71.0;
    let v = variance_constant();
    certs_ok && zeta_ok && pi_ok && v < 10_943.0 / 54_000.0 && v < 0.25
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_matches_reference() {
        assert!((zeta3() - APERY_REFERENCE).abs() <= 1e-15, "{}", zeta3());
    }

    #[test]
    fn zeta3_within_bracket_for_small_n() {
        let z = zeta3();
        for n in [5u64, 10, 100] {
            let s = zeta3_partial_sum(n);
            assert!(s < z && z < s + 0.5 / (n as f64).powi(2), "n = {n}");
        }
    }

    #[test]
    fn zeta3_partial_sum_lower_bound() {
        assert!(zeta3() > 1.0 + 1.0 / 8.0 + 1.0 / 27.0);
        assert!(zeta3() < 260_423.0 / 216_000.0);
    }

    #[test]
    fn alternating_sum_is_three_quarters_zeta3() {
        assert!((alternating_zeta3() - 0.75 * zeta3()).abs() <= 1e-12);
    }

    #[test]
    fn variance_matches_reference() {
        let v = variance_constant();
        assert!((v - VARIANCE_REFERENCE).abs() <= 1e-9, "{v}");
        assert!(v > 0.0);
    }

    #[test]
    fn constants_are_consistent() {
        let c = SharedConstants::get();
        assert_eq!(c.variance, 4.0 * c.zeta3 - (c.pi * c.pi + 4.0) / 3.0);
        assert!((c.e_xi_sq - (c.variance + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn every_certificate_holds() {
        let certs = rational_certificates();
        assert_eq!(certs.len(), 11);
        for c in &certs {
            assert!(c.holds, "{c}");
        }
        assert!(variance_below_quarter_certified());
    }

    #[test]
    fn certificate_values_are_exact() {
        let certs = rational_certificates();
        let by = |n: &str| certs.iter().find(|c| c.name == n).unwrap().clone();
        assert_eq!(by("zeta3_integral_test_upper").lhs, q(260_423, 216_000));
        assert_eq!(by("variance_upper").lhs, q(10_943, 54_000));
        assert_eq!(by("ratio_cubed").lhs, q(262_144, 29_791));
    }

    #[test]
    fn wrong_relation_fails() {
        let c = RationalCertificate::new("bad", q(1, 3), Relation::Greater, q(1, 2));
        assert!(!c.holds);
    }
}
