//! The k-zeta function `ζ_k(x, s) = Σ_{n≥0} (x + nk)^{-s}`.
//!
//! Factoring k out of every term gives `ζ_k(x, s) = k^{-s} ζ_H(s, x/k)`, so
//! the Euler–Maclaurin Hurwitz engine supplies both the s > 1 values and
//! the continuation to s ≤ 1 (s ≠ 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_k::psi_point;
use crate::numerics::{
    hurwitz_zeta, hurwitz_zeta_s_difference, EvalResult, Method, PrecisionProfile,
};

/// Step for the central difference in s at s = 0.
pub const DS_STEP: f64 = 1e-5;
/// Relative step for the second central difference in x.
pub const DXX_REL_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaKSpec {
    pub k: f64,
    pub x: f64,
    pub s: f64,
}

impl ZetaKSpec {
    pub fn new(k: f64, x: f64, s: f64) -> Result<Self> {
        let spec = ZetaKSpec { k, x, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) || !(self.x > 0.0 && self.x.is_finite()) {
            return Err(Error::domain(format!(
                "ζ_k needs k, x > 0, got k = {}, x = {}",
                self.k, self.x
            )));
        }
        if !self.s.is_finite() {
            return Err(Error::domain("ζ_k needs a finite s"));
        }
        Ok(())
    }
}

pub fn zeta_k(spec: &ZetaKSpec, profile: &PrecisionProfile) -> Result<EvalResult> {
    spec.validate()?;
    let ZetaKSpec { k, x, s } = *spec;
    let h = hurwitz_zeta(s, x / k, profile)?;
    Ok(h.scaled(k.powf(-s)))
}

/// `(ζ_k(x, 2), ∂²_x log Γ_k(x))`; the two should coincide.
pub fn zeta_k_identity_trigamma(k: f64, x: f64, profile: &PrecisionProfile) -> Result<(f64, f64)> {
    let z = zeta_k(&ZetaKSpec::new(k, x, 2.0)?, profile)?.value;
    let psi_xx = psi_point(k, x, profile)?.psi_xx;
    Ok((z, psi_xx))
}

/// `∂_s ζ_k(x, s)` at s = 0 by a central difference with step [`DS_STEP`].
///
/// With L = log k, `k^{-s} ζ_H(s, a)` differences as
/// `[-sinh(hL)(ζ_H(h) + ζ_H(-h)) + cosh(hL)(ζ_H(h) - ζ_H(-h))] / (2h)`,
/// and the ζ_H difference itself is formed without cancellation.
pub fn zeta_k_ds(k: f64, x: f64, profile: &PrecisionProfile) -> Result<f64> {
    ZetaKSpec::new(k, x, 0.0)?;
    let h = DS_STEP;
    let a = x / k;
    let l = k.ln();
    let plus = hurwitz_zeta(h, a, profile)?.value;
    let minus = hurwitz_zeta(-h, a, profile)?.value;
    let diff = hurwitz_zeta_s_difference(0.0, h, a)?;
    Ok((-(h * l).sinh() * (plus + minus) / (2.0 * h)) + (h * l).cosh() * diff)
}

/// Second central x-difference (step 1e-4·x) of `∂_s ζ_k(x, s)|_{s=0}`.
///
/// Analytically this equals `+∂²_x log Γ_k(x)`, since
/// `∂_s ζ_k(x, s)|_{s=0} = log Γ_k(x) + (linear in x)`. The error estimate
/// compares against the same stencil at twice the step.
pub fn zeta_k_ds_at_zero(k: f64, x: f64, profile: &PrecisionProfile) -> Result<EvalResult> {
    let stencil = |h: f64| -> Result<f64> {
        if x - h <= 0.0 {
            return Err(Error::domain("x too small for the x-difference stencil"));
        }
        let lo = zeta_k_ds(k, x - h, profile)?;
        let mid = zeta_k_ds(k, x, profile)?;
        let hi = zeta_k_ds(k, x + h, profile)?;
        Ok((hi - 2.0 * mid + lo) / (h * h))
    };
    let h = DXX_REL_STEP * x;
    let fine = stencil(h)?;
    let coarse = stencil(2.0 * h)?;
    Ok(EvalResult::new(
        fine,
        (fine - coarse).abs(),
        Method::FiniteDifference,
        6,
    ))
}

/// `∂_k^m ζ_k(x, s)` from term-wise differentiation:
/// `(-1)^m (s)_m Σ_{n≥0} n^m (x + nk)^{-s-m}` for s > 1.
///
/// The sum is reduced to k-zeta values through
/// `n^m = k^{-m} ((x + nk) - x)^m`, each evaluated by Euler–Maclaurin.
pub fn zeta_k_dk(spec: &ZetaKSpec, m: u32, profile: &PrecisionProfile) -> Result<EvalResult> {
    let moment = weighted_moment(spec, m, profile)?;
    let rising = rising_factorial(spec.s, m);
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(moment.scaled(sign * rising))
}

/// The derivative in the printed form `-x (s)_m Σ n^m / (x + nk)^{m+s}`.
///
/// Kept only to demonstrate that it disagrees with [`zeta_k_dk`] (and with
/// finite differences) unless m is odd and x = 1.
pub fn zeta_k_dk_as_printed(
    spec: &ZetaKSpec,
    m: u32,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    let moment = weighted_moment(spec, m, profile)?;
    Ok(moment.scaled(-spec.x * rising_factorial(spec.s, m)))
}

/// `Σ_{n≥0} n^m (x + nk)^{-s-m}`.
fn weighted_moment(spec: &ZetaKSpec, m: u32, profile: &PrecisionProfile) -> Result<EvalResult> {
    spec.validate()?;
    if m == 0 {
        return Err(Error::domain("derivative order m must be at least 1"));
    }
    if !(spec.s > 1.0) {
        return Err(Error::domain(format!(
            "term-wise k-derivatives need s > 1, got s = {}",
            spec.s
        )));
    }
    let ZetaKSpec { k, x, s } = *spec;
    let m_us = m as usize;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut binom = 1.0;
    let mut cutoff = 0;
    for j in 0..=m_us {
        // C(m, j) (-x)^{m-j} ζ_k(x, s + m - j)
        let z = zeta_k(&ZetaKSpec::new(k, x, s + (m_us - j) as f64)?, profile)?;
        let coeff = binom * (-x).powi((m_us - j) as i32);
        value += coeff * z.value;
        err += (coeff * z.err_estimate).abs() + f64::EPSILON * (coeff * z.value).abs();
        cutoff = cutoff.max(z.terms_or_nodes_used);
        binom = binom * (m_us - j) as f64 / (j + 1) as f64;
    }
    let scale = k.powi(-(m as i32));
    Ok(EvalResult::new(
        value * scale,
        err * scale,
        Method::EulerMaclaurin,
        cutoff,
    ))
}

fn rising_factorial(s: f64, m: u32) -> f64 {
    (0..m).map(|i| s + f64::from(i)).product()
}
