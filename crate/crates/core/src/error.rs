use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The integrand returned a non-finite value at an interior node.
    #[error("integrand is not finite at x = {x:e} (value {value})")]
    NonFiniteSample { x: f64, value: f64 },

    /// A one-sided limit could not be extrapolated.
    #[error("limit extrapolation diverged: {0}")]
    Divergence(String),

    /// A monotone root search failed to bracket its root.
    #[error("root solver failure: {0}")]
    Solver(String),

    /// The shooting oracle could not bracket the first eigenvalue.
    #[error("eigenvalue bracket failure: {0}")]
    Bracket(String),

    /// The eigenfunction changes sign inside the cap, so the bracket locked
    /// onto a higher eigenvalue.
    #[error("eigenfunction vanishes at r = {r} < R = {radius}; not the first eigenvalue")]
    Oscillation { r: f64, radius: f64 },

    /// Geometry input violates one of its invariants.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
