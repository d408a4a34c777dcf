use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a precondition of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument sits on (or numerically at) a pole of a k-gamma type function.
    #[error("pole: argument {x} coincides with the pole at {pole}")]
    Pole { x: f64, pole: f64 },

    /// Hurwitz / k-zeta evaluated at its pole s = 1.
    #[error("zeta pole at s = 1")]
    ZetaPole,

    #[error(
        "no convergence in {what} after {iterations} steps (last error estimate {err_estimate:e})"
    )]
    NonConvergent {
        what: &'static str,
        iterations: usize,
        err_estimate: f64,
    },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("|x| = {x} is outside the convergence radius {radius}")]
    OutsideRadius { x: f64, radius: f64 },

    #[error("series with p = {p} > q + 1 = {} diverges for every x != 0", .q + 1)]
    DivergentSeries { p: usize, q: usize },

    #[error("family has {count} members, above the enumeration cap {cap}")]
    CapExceeded { count: BigUint, cap: u64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the inputs (as opposed to numerical failure).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Pole { .. }
                | Error::ZetaPole
                | Error::OutsideRadius { .. }
                | Error::DivergentSeries { .. }
                | Error::CapExceeded { .. }
                | Error::InvariantViolation(_)
        )
    }
}
