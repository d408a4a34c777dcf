//! k-deformed special functions.
//!
//! The Pochhammer k-symbol `(x)_{n,k}`, the k-gamma function Γ_k, the
//! k-beta function B_k, the k-zeta function ζ_k and the k-hypergeometric
//! series F(a, k, b, s), each with independent evaluation routes so that
//! their identities can be checked numerically, plus an enumerator for the
//! planar forests counted by the k-symbol.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta_k;
pub mod cli;
pub mod error;
pub mod forests;
pub mod gamma_k;
pub mod hypergeometric;
pub mod numerics;
pub mod pochhammer;
pub mod verify;
pub mod zeta_k;

pub use error::{Error, Result};
pub use numerics::{EvalResult, Method, PrecisionProfile};
