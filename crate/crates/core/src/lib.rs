//! Lower bounds for the first Dirichlet eigenvalue of compact manifolds with
//! boundary under a positive Ricci lower bound, together with the numerical
//! machinery that checks every identity and inequality behind them.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`]: tanh-sinh integration and one-sided limit extrapolation.
//! - [`constants`]: ζ(3), the variance constant `V`, and exact rational
//!   certificates.
//! - [`comparison`]: the comparison function ξ, the profile `z = 1 + δξ`,
//!   and the Jensen / strong-convexity integral estimates.
//! - [`identities`]: log-cosine integrals, Fourier coefficients, and the
//!   integration-by-parts reduction of `∫ ξ²` with its boundary term.
//! - [`bounds`]: the Reilly, Ling, variance-refined and implicit bounds.
//! - [`oracle`]: first Dirichlet eigenvalue of spherical caps by shooting,
//!   plus a finite-difference cross-check.
//! - [`verify`]: the full check ledger, and [`cli`]: the command-line front
//!   end used by the `eigenbound` binary.
//!
//! ```
//! use eigenbound::bounds::{self, GeometryInput};
//!
//! let g = GeometryInput::new(10, 1.0, std::f64::consts::PI).unwrap();
//! let ling = bounds::ling(&g);
//! let refined = bounds::refined(&g);
//! assert!((ling - 5.5).abs() < 1e-12);
//! assert!(refined > ling);
//! ```

pub mod bounds;
pub mod check;
pub mod cli;
pub mod comparison;
pub mod constants;
mod error;
pub mod identities;
pub mod oracle;
pub mod quadrature;
pub mod verify;

pub use check::{CheckKind, CheckRecord};
pub use error::{Error, Result};
