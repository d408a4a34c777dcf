//! The k-beta function `B_k(x, y) = Γ_k(x) Γ_k(y) / Γ_k(x + y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_k::log_gamma_k;
use crate::numerics::{
    quad_halfline, quad_unit, CompensatedSum, EvalResult, Method, PrecisionProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaKSpec {
    pub k: f64,
    pub x: f64,
    pub y: f64,
}

impl BetaKSpec {
    pub fn new(k: f64, x: f64, y: f64) -> Result<Self> {
        let spec = BetaKSpec { k, x, y };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.k) || !ok(self.x) || !ok(self.y) {
            return Err(Error::domain(format!(
                "B_k needs k, x, y > 0, got k = {}, x = {}, y = {}",
                self.k, self.x, self.y
            )));
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        BetaKSpec {
            x: self.y,
            y: self.x,
            ..*self
        }
    }
}

/// Ratio of k-gammas, combined in log space.
pub fn beta_k_ratio(spec: &BetaKSpec) -> Result<EvalResult> {
    spec.validate()?;
    let BetaKSpec { k, x, y } = *spec;
    let (lx, ly, lxy) = (
        log_gamma_k(k, x)?,
        log_gamma_k(k, y)?,
        log_gamma_k(k, x + y)?,
    );
    let ln = lx + ly - lxy;
    let value = ln.exp();
    let err = value * (6e-15 + 4.0 * f64::EPSILON * (lx.abs() + ly.abs() + lxy.abs() + 1.0));
    Ok(EvalResult::new(value, err, Method::Scaling, 3))
}

/// `∫₀^∞ t^{x-1} (1 + t^k)^{-(x+y)/k} dt`.
pub fn beta_k_integral_halfline(
    spec: &BetaKSpec,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    spec.validate()?;
    let BetaKSpec { k, x, y } = *spec;
    let power = (x + y) / k;
    quad_halfline(
        |t| {
            let lt = t.ln();
            // log(1 + t^k) without overflow for large t
            let log_one_plus = if lt * k < 0.0 {
                (k * lt).exp().ln_1p()
            } else {
                k * lt + (-k * lt).exp().ln_1p()
            };
            ((x - 1.0) * lt - power * log_one_plus).exp()
        },
        profile,
    )
}

/// `(1/k) ∫₀¹ t^{x/k-1} (1-t)^{y/k-1} dt`.
pub fn beta_k_integral_unit(spec: &BetaKSpec, profile: &PrecisionProfile) -> Result<EvalResult> {
    spec.validate()?;
    let BetaKSpec { k, x, y } = *spec;
    let raw = quad_unit(
        |t, t_comp| ((x / k - 1.0) * t.ln() + (y / k - 1.0) * t_comp.ln()).exp(),
        profile,
    )?;
    Ok(raw.scaled(1.0 / k))
}

/// `((x+y)/(xy)) Π_{n=1}^{N} nk(nk+x+y) / ((nk+x)(nk+y))`, times the tail
/// estimate `exp(-(xy/k²) Σ_{n>N} 1/n²)`.
///
/// The n = 0 factor of the product is the prefactor `(x+y)/(xy)`.
pub fn beta_k_product(spec: &BetaKSpec, n_terms: u64) -> Result<EvalResult> {
    spec.validate()?;
    if n_terms == 0 {
        return Err(Error::domain("product route requires at least one factor"));
    }
    let BetaKSpec { k, x, y } = *spec;
    let mut acc = CompensatedSum::new();
    acc.add(((x + y) / (x * y)).ln());
    for n in 1..=n_terms {
        let nk = n as f64 * k;
        // each factor is 1 - xy / ((nk+x)(nk+y))
        acc.add((-(x * y) / ((nk + x) * (nk + y))).ln_1p());
    }
    let big_n = n_terms as f64;
    let inv_sq_tail = 1.0 / big_n - 0.5 / (big_n * big_n) + 1.0 / (6.0 * big_n.powi(3));
    acc.add(-(x * y) / (k * k) * inv_sq_tail);
    let ln = acc.value();
    let value = ln.exp();
    if !value.is_finite() {
        return Err(Error::NonConvergent {
            what: "k-beta product",
            iterations: n_terms as usize,
            err_estimate: f64::INFINITY,
        });
    }
    // next order of the log tail is xy(x+y)/k³ · Σ_{n>N} 1/n³; twice that
    // keeps the estimate an upper bound
    let truncation = x * y * (x + y) / k.powi(3) / (big_n * big_n);
    let err = value * (truncation + 8.0 * f64::EPSILON * (ln.abs() + 1.0));
    Ok(EvalResult::new(
        value,
        err,
        Method::Product,
        n_terms as usize,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn b(k: f64, x: f64, y: f64) -> BetaKSpec {
        BetaKSpec::new(k, x, y).unwrap()
    }

    fn p() -> PrecisionProfile {
        PrecisionProfile::default()
    }

    #[test]
    fn ratio_examples() {
        for &k in &[0.5, 1.0, 2.0, 3.0] {
            let v = beta_k_ratio(&b(k, k, k)).unwrap().value;
            assert!((v - 1.0 / k).abs() < 1e-13, "k = {k}");
        }
        assert!((beta_k_ratio(&b(1.0, 1.0, 1.0)).unwrap().value - 1.0).abs() < 1e-14);
        assert!((beta_k_ratio(&b(1.0, 2.0, 3.0)).unwrap().value - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn halfline_examples() {
        assert!(
            (beta_k_integral_halfline(&b(1.0, 1.0, 1.0), &p())
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-10
        );
        let s = b(2.0, 1.0, 1.0);
        let q = beta_k_integral_halfline(&s, &p()).unwrap();
        let r = beta_k_ratio(&s).unwrap();
        assert!((q.value - r.value).abs() < 1e-10 * r.value);
        let v = beta_k_integral_halfline(&b(1.0, 0.5, 0.5), &p())
            .unwrap()
            .value;
        assert!((v - PI).abs() < 1e-9);
    }

    #[test]
    fn unit_examples() {
        assert!((beta_k_integral_unit(&b(1.0, 1.0, 1.0), &p()).unwrap().value - 1.0).abs() < 1e-12);
        assert!((beta_k_integral_unit(&b(2.0, 2.0, 2.0), &p()).unwrap().value - 0.5).abs() < 1e-12);
        let s = b(3.0, 1.2, 0.8);
        let u = beta_k_integral_unit(&s, &p()).unwrap().value;
        let r = beta_k_ratio(&s).unwrap().value;
        assert!((u - r).abs() < 1e-10 * r);
    }

    #[test]
    fn product_examples() {
        let v = beta_k_product(&b(1.0, 1.0, 1.0), 10_000).unwrap().value;
        assert!((v - 1.0).abs() < 1e-5);
        let s = b(2.0, 2.0, 4.0);
        let v = beta_k_product(&s, 10_000).unwrap().value;
        assert!((v - beta_k_ratio(&s).unwrap().value).abs() < 1e-5);
        let v = beta_k_product(&b(1.0, 0.5, 1.5), 10_000).unwrap().value;
        assert!((v - PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn product_error_estimate_is_honest() {
        let s = b(0.5, 2.5, 1.0);
        let r = beta_k_product(&s, 1_000).unwrap();
        let exact = beta_k_ratio(&s).unwrap().value;
        assert!(
            (r.value - exact).abs() <= r.err_estimate,
            "{r:?} vs {exact}"
        );
    }

    #[test]
    fn rejects_non_positive() {
        assert!(BetaKSpec::new(1.0, 0.0, 1.0).is_err());
        assert!(BetaKSpec::new(0.0, 1.0, 1.0).is_err());
        let bad = BetaKSpec {
            k: 1.0,
            x: 1.0,
            y: -2.0,
        };
        assert!(matches!(beta_k_ratio(&bad), Err(Error::Domain(_))));
        assert!(beta_k_product(&b(1.0, 1.0, 1.0), 0).is_err());
    }
}
