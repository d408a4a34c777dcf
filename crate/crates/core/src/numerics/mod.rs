//! Shared numerical engines: half-line and unit-interval double-exponential
//! quadrature, Lanczos log-gamma, Hurwitz zeta by Euler–Maclaurin, and a
//! safeguarded series summer.
//!
//! Every routine is a pure function of its arguments and of the
//! [`PrecisionProfile`] it is handed.

mod lanczos;
mod quad;
mod series;
mod zeta;

pub use lanczos::log_gamma_classic;
pub use quad::{quad_halfline, quad_halfline_propagating, quad_unit};
pub use series::{shifted_harmonic, sum_series};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_s_difference};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Euler–Mascheroni constant, `lim (1 + 1/2 + ... + 1/n - log n)`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Even-index Bernoulli numbers B₂, B₄, …, B₁₂.
pub(crate) const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Tolerances and work caps shared by every iterative routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionProfile {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    pub max_quad_refinements: usize,
}

impl Default for PrecisionProfile {
    fn default() -> Self {
        PrecisionProfile {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_terms: 100_000,
            max_quad_refinements: 12,
        }
    }
}

impl PrecisionProfile {
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_terms: usize,
        max_quad_refinements: usize,
    ) -> Result<Self> {
        let profile = PrecisionProfile {
            rel_tol,
            abs_tol,
            max_terms,
            max_quad_refinements,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn strict() -> Self {
        PrecisionProfile {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_terms: 1_000_000,
            max_quad_refinements: 14,
        }
    }

    pub fn fast() -> Self {
        PrecisionProfile {
            rel_tol: 1e-7,
            abs_tol: 1e-12,
            max_terms: 20_000,
            max_quad_refinements: 9,
        }
    }

    /// Looks up a named profile: `strict`, `default` or `fast`.
    pub fn named(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "strict" => Ok(Self::strict()),
            "default" | "" => Ok(Self::default()),
            "fast" => Ok(Self::fast()),
            other => Err(Error::domain(format!(
                "unknown precision profile '{other}' (expected strict, default or fast)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain("rel_tol must be positive"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::domain("abs_tol must be positive"));
        }
        if self.max_terms < 1 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        if self.max_quad_refinements < 1 {
            return Err(Error::domain("max_quad_refinements must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Limit,
    Integral,
    Scaling,
    Product,
    Series,
    EulerMaclaurin,
    FiniteDifference,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Limit => "limit",
            Method::Integral => "integral",
            Method::Scaling => "scaling",
            Method::Product => "product",
            Method::Series => "series",
            Method::EulerMaclaurin => "euler_maclaurin",
            Method::FiniteDifference => "finite_difference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value together with an error estimate and provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub err_estimate: f64,
    pub method: Method,
    pub terms_or_nodes_used: usize,
}

impl EvalResult {
    pub fn new(value: f64, err_estimate: f64, method: Method, terms_or_nodes_used: usize) -> Self {
        EvalResult {
            value,
            err_estimate: err_estimate.abs(),
            method,
            terms_or_nodes_used,
        }
    }

    /// Whether `other` lies within the combined error bars of both results.
    pub fn agrees_with(&self, other: &EvalResult) -> bool {
        (self.value - other.value).abs() <= self.err_estimate + other.err_estimate
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        EvalResult {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            ..self
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Rounding floor used for error estimates of closed-form evaluations.
pub(crate) fn rounding_floor(value: f64, ops: f64) -> f64 {
    ops * f64::EPSILON * value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_gamma_bounds() {
        // harmonic definition, corrected by the 1/(2n) term
        let n = 100_000usize;
        let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        let approx = h - (n as f64).ln() - 1.0 / (2.0 * n as f64);
        assert!((approx - EULER_GAMMA).abs() < 1e-10);
    }

    #[test]
    fn profile_validation() {
        assert!(PrecisionProfile::new(0.0, 1e-14, 10, 3).is_err());
        assert!(PrecisionProfile::new(1e-8, -1.0, 10, 3).is_err());
        assert!(PrecisionProfile::new(1e-8, 1e-14, 0, 3).is_err());
        assert!(PrecisionProfile::new(1e-8, 1e-14, 10, 0).is_err());
        assert!(PrecisionProfile::new(1e-8, 1e-14, 10, 3).is_ok());
        assert_eq!(
            PrecisionProfile::named("DEFAULT").unwrap(),
            PrecisionProfile::default()
        );
        assert!(PrecisionProfile::named("sloppy").is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
    }
}
