//! The k-gamma function Γ_k and the k-dependence of ψ(k, x) = log Γ_k(x).
//!
//! Four independent routes evaluate Γ_k:
//!
//! * **scaling**: `Γ_k(x) = k^{x/k - 1} Γ(x/k)` with a Lanczos log-gamma. This
//!   is the reference route.
//! * **integral**: `∫₀^∞ t^{x-1} e^{-t^k/k} dt` by double-exponential quadrature.
//! * **limit**: the n-th iterate of `n! k^n (nk)^{x/k - 1} / (x)_{n,k}`,
//!   without extrapolation.
//! * **product**: the truncated Weierstrass product for `1/Γ_k` with a
//!   quadratic tail correction.
//!
//! The limit and product routes also cover negative non-pole arguments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    hurwitz_zeta, log_gamma_classic, quad_halfline, shifted_harmonic, CompensatedSum, EvalResult,
    Method, PrecisionProfile, EULER_GAMMA,
};

pub const DEFAULT_LIMIT_ITERATE: u64 = 1_000_000;
pub const DEFAULT_PRODUCT_TERMS: u64 = 10_000;

/// Relative accuracy of the g = 7 Lanczos log-gamma after exponentiation.
const LANCZOS_REL_ERR: f64 = 2e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    Limit,
    Integral,
    Scaling,
    Product,
}

impl GammaMethod {
    pub const ALL: [GammaMethod; 4] = [
        GammaMethod::Scaling,
        GammaMethod::Integral,
        GammaMethod::Limit,
        GammaMethod::Product,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GammaMethod::Limit => "limit",
            GammaMethod::Integral => "integral",
            GammaMethod::Scaling => "scaling",
            GammaMethod::Product => "product",
        }
    }
}

impl std::str::FromStr for GammaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limit" => Ok(GammaMethod::Limit),
            "integral" => Ok(GammaMethod::Integral),
            "scaling" => Ok(GammaMethod::Scaling),
            "product" => Ok(GammaMethod::Product),
            other => Err(Error::domain(format!("unknown gamma_k method '{other}'"))),
        }
    }
}

/// An immutable Γ_k evaluator: step `k`, route, and precision profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaKEvaluator {
    k: f64,
    method: GammaMethod,
    profile: PrecisionProfile,
    limit_n: u64,
    product_terms: u64,
}

impl GammaKEvaluator {
    pub fn new(k: f64, method: GammaMethod) -> Result<Self> {
        check_k(k)?;
        Ok(GammaKEvaluator {
            k,
            method,
            profile: PrecisionProfile::default(),
            limit_n: DEFAULT_LIMIT_ITERATE,
            product_terms: DEFAULT_PRODUCT_TERMS,
        })
    }

    pub fn with_profile(mut self, profile: PrecisionProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_limit_iterate(mut self, n: u64) -> Self {
        self.limit_n = n.max(1);
        self
    }

    pub fn with_product_terms(mut self, n_terms: u64) -> Self {
        self.product_terms = n_terms.max(1);
        self
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn method(&self) -> GammaMethod {
        self.method
    }

    pub fn profile(&self) -> &PrecisionProfile {
        &self.profile
    }

    /// Γ_k(x) by the configured route.
    pub fn evaluate(&self, x: f64) -> Result<EvalResult> {
        match self.method {
            GammaMethod::Scaling => self.scaling(x),
            GammaMethod::Integral => self.integral(x),
            GammaMethod::Limit => self.limit(x, self.limit_n),
            GammaMethod::Product => self.product(x, self.product_terms),
        }
    }

    /// `k^{x/k - 1} Γ(x/k)`, x > 0.
    pub fn scaling(&self, x: f64) -> Result<EvalResult> {
        let ln = log_gamma_k(self.k, x)?;
        let value = ln.exp();
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "Γ_k({x}) with k = {} overflows",
                self.k
            )));
        }
        let err = value * (LANCZOS_REL_ERR + 4.0 * f64::EPSILON * (ln.abs() + 1.0));
        Ok(EvalResult::new(value, err, Method::Scaling, 1))
    }

    /// `∫₀^∞ t^{x-1} e^{-t^k/k} dt`, x > 0.
    pub fn integral(&self, x: f64) -> Result<EvalResult> {
        check_positive(self.k, x)?;
        let k = self.k;
        quad_halfline(
            |t| ((x - 1.0) * t.ln() - t.powf(k) / k).exp(),
            &self.profile,
        )
    }

    /// The n-th iterate of `n! k^n (nk)^{x/k-1} / (x)_{n,k}`.
    ///
    /// The error decays like 1/n, so the distance to the iterate at n/2 is
    /// about the error itself; twice that distance is reported.
    pub fn limit(&self, x: f64, n: u64) -> Result<EvalResult> {
        check_pole(self.k, x)?;
        if n == 0 {
            return Err(Error::domain("limit iterate requires n >= 1"));
        }
        let k = self.k;
        let u = x / k;
        // n! k^n / (x)_{n,k} = (nk / x) Π_{j=1}^{n-1} 1 / (1 + u/j)
        let iterate = |m: u64, log_sum: f64, sign: f64| -> f64 {
            let mk = m as f64 * k;
            let ln = (mk / x.abs()).ln() - log_sum + (u - 1.0) * mk.ln();
            sign * x.signum() * ln.exp()
        };

        let half = n / 2;
        let mut acc = CompensatedSum::new();
        let mut sign = 1.0;
        let mut half_value = None;
        for j in 1..n {
            if j == half && half >= 1 {
                half_value = Some(iterate(half, acc.value(), sign));
            }
            let factor = u / j as f64;
            if factor > -1.0 {
                acc.add(factor.ln_1p());
            } else {
                sign = -sign;
                acc.add((1.0 + factor).abs().ln());
            }
        }
        let value = iterate(n, acc.value(), sign);
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "limit iterate for Γ_k({x}) overflows"
            )));
        }
        let err = match half_value {
            Some(h) => 2.0 * (value - h).abs(),
            None => f64::INFINITY,
        };
        Ok(EvalResult::new(value, err, Method::Limit, n as usize))
    }

    /// Reciprocal of `x k^{-x/k} e^{xγ/k} Π_{n≤N} (1 + x/(nk)) e^{-x/(nk)}`,
    /// with the omitted factors approximated by `exp(-(x/k)²/2 · Σ_{n>N} 1/n²)`.
    pub fn product(&self, x: f64, n_terms: u64) -> Result<EvalResult> {
        check_pole(self.k, x)?;
        if n_terms == 0 {
            return Err(Error::domain("product route requires at least one factor"));
        }
        let k = self.k;
        let u = x / k;
        let mut acc = CompensatedSum::new();
        let mut sign = x.signum();
        acc.add(x.abs().ln());
        acc.add(-u * k.ln());
        acc.add(u * EULER_GAMMA);
        for n in 1..=n_terms {
            let v = u / n as f64;
            if v > -1.0 {
                acc.add(v.ln_1p() - v);
            } else {
                sign = -sign;
                acc.add((1.0 + v).abs().ln() - v);
            }
        }
        let big_n = n_terms as f64;
        let inv_sq_tail = 1.0 / big_n - 0.5 / (big_n * big_n) + 1.0 / (6.0 * big_n.powi(3));
        acc.add(-0.5 * u * u * inv_sq_tail);
        let ln_reciprocal = acc.value();
        let value = sign * (-ln_reciprocal).exp();
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "product route for Γ_k({x}) overflows"
            )));
        }
        // next tail order is u³/3 · Σ_{n>N} 1/n³ ≈ u³/(6N²); twice that
        // keeps the estimate an upper bound
        let truncation = u.abs().powi(3) / (3.0 * big_n * big_n);
        let rounding = 8.0 * f64::EPSILON * (ln_reciprocal.abs() + 1.0);
        let err = value.abs() * (truncation + rounding);
        Ok(EvalResult::new(
            value,
            err,
            Method::Product,
            n_terms as usize,
        ))
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!(
            "k must be a finite positive number, got {k}"
        )));
    }
    Ok(())
}

/// Rejects x ∈ kℤ⁻ ∪ {0}, reporting the nearest pole.
pub fn check_pole(k: f64, x: f64) -> Result<()> {
    check_k(k)?;
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite, got {x}")));
    }
    let u = x / k;
    let nearest = u.round();
    if nearest <= 0.0 && (u - nearest).abs() <= 1e-12 * nearest.abs().max(1.0) {
        return Err(Error::Pole {
            x,
            pole: nearest * k,
        });
    }
    Ok(())
}

fn check_positive(k: f64, x: f64) -> Result<()> {
    check_pole(k, x)?;
    if x <= 0.0 {
        return Err(Error::domain(format!("this route requires x > 0, got {x}")));
    }
    Ok(())
}

/// `log Γ_k(x) = (x/k - 1) log k + log Γ(x/k)` for x > 0.
pub fn log_gamma_k(k: f64, x: f64) -> Result<f64> {
    check_positive(k, x)?;
    let u = x / k;
    Ok((u - 1.0) * k.ln() + log_gamma_classic(u)?)
}

/// Γ_k(x) by the reference (scaling) route.
pub fn gamma_k(k: f64, x: f64) -> Result<f64> {
    Ok(GammaKEvaluator::new(k, GammaMethod::Scaling)?
        .scaling(x)?
        .value)
}

/// Γ_s(x) computed through Γ_k: `(s/k)^{x/s - 1} Γ_k(kx/s)`.
pub fn gamma_k_rescale(x: f64, s: f64, k: f64) -> Result<f64> {
    check_k(s)?;
    let inner = gamma_k(k, k * x / s)?;
    Ok((s / k).powf(x / s - 1.0) * inner)
}

/// `a^{x/k} ∫₀^∞ t^{x-1} e^{-a t^k / k} dt`, which equals Γ_k(x) for every a > 0.
pub fn gamma_k_parametric_integral(
    k: f64,
    x: f64,
    a: f64,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    check_positive(k, x)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!(
            "the scaled integral converges only for a > 0, got {a}"
        )));
    }
    let raw = quad_halfline(|t| ((x - 1.0) * t.ln() - a * t.powf(k) / k).exp(), profile)?;
    Ok(raw.scaled(a.powf(x / k)))
}

/// Leading k-Stirling term `√(2π) (kx)^{-1/2} x^{(x+1)/k} e^{-x/k}` for Γ_k(x + 1).
pub fn gamma_k_stirling(k: f64, x: f64) -> Result<f64> {
    check_k(k)?;
    if !(x > 0.0) {
        return Err(Error::domain(format!(
            "Stirling term requires x > 0, got {x}"
        )));
    }
    let ln = 0.5 * (2.0 * PI).ln() - 0.5 * (k * x).ln() + (x + 1.0) / k * x.ln() - x / k;
    Ok(ln.exp())
}

/// `∂_k Γ_k(x + 1) = Γ_k(x + k + 1)/k² - (1/k) ∫₀^∞ t^{x+k} log t · e^{-t^k/k} dt`.
pub fn gamma_k_dk(k: f64, x: f64, profile: &PrecisionProfile) -> Result<EvalResult> {
    check_positive(k, x)?;
    let shifted = GammaKEvaluator::new(k, GammaMethod::Scaling)?.scaling(x + k + 1.0)?;
    let log_moment = quad_halfline(
        |t| {
            let lt = t.ln();
            ((x + k) * lt - t.powf(k) / k).exp() * lt
        },
        profile,
    )?;
    let value = shifted.value / (k * k) - log_moment.value / k;
    let err = shifted.err_estimate / (k * k) + log_moment.err_estimate / k;
    Ok(EvalResult::new(
        value,
        err,
        Method::Integral,
        log_moment.terms_or_nodes_used,
    ))
}

/// ψ(k, x) = log Γ_k(x) and its partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiPoint {
    pub k: f64,
    pub x: f64,
    pub psi: f64,
    pub psi_x: f64,
    pub psi_xx: f64,
    pub psi_k: f64,
    pub psi_kk: f64,
}

/// Relative step for the k-difference giving ψ_kk.
pub const PSI_KK_STEP: f64 = 1e-5;

/// Evaluates ψ and its partials from the product-expansion series:
///
/// * ψ_x  = -1/x + (log k - γ)/k - Σ_{n≥1} (1/(x+nk) - 1/(nk))
/// * ψ_xx = Σ_{n≥0} 1/(x+nk)², a k-zeta value at s = 2
/// * ψ_k  = (x/k²) (1 - log k + γ + Σ_{n≥1} (k/(x+nk) - 1/n))
/// * ψ_kk by a central difference of ψ_k with step 1e-5·k
pub fn psi_point(k: f64, x: f64, profile: &PrecisionProfile) -> Result<PsiPoint> {
    check_positive(k, x)?;
    let psi = log_gamma_k(k, x)?;
    let u = x / k;
    let harmonic = shifted_harmonic(u, profile)?.value;
    let psi_x = -1.0 / x + (k.ln() - EULER_GAMMA) / k - harmonic / k;
    let psi_xx = hurwitz_zeta(2.0, u, profile)?.value / (k * k);
    let psi_k = psi_k_series(k, x, profile)?;
    let h = PSI_KK_STEP * k;
    let psi_kk = (psi_k_series(k + h, x, profile)? - psi_k_series(k - h, x, profile)?) / (2.0 * h);
    let point = PsiPoint {
        k,
        x,
        psi,
        psi_x,
        psi_xx,
        psi_k,
        psi_kk,
    };
    if !(point.psi_xx > 0.0) {
        return Err(Error::InvariantViolation(format!(
            "ψ_xx = {} is not positive at k = {k}, x = {x}",
            point.psi_xx
        )));
    }
    Ok(point)
}

fn psi_k_series(k: f64, x: f64, profile: &PrecisionProfile) -> Result<f64> {
    let harmonic = shifted_harmonic(x / k, profile)?.value;
    Ok(x / (k * k) * (1.0 - k.ln() + EULER_GAMMA + harmonic))
}

/// `-k x² ψ_xx + k³ ψ_kk + 2k² ψ_k + x(k + 1)`, the residual of the k-PDE with
/// right-hand side `-x(k+1)`.
///
/// That right-hand side only balances at x = 1: the product expansion gives
/// `∂_k(k² ∂_k ψ) = x² ψ_xx - 1 - x/k`, so this residual equals `k(x - 1)`.
/// [`pde_residual_corrected`] uses the balancing right-hand side `-(x + k)`.
pub fn pde_residual(p: &PsiPoint) -> f64 {
    pde_lhs(p) + p.x * (p.k + 1.0)
}

/// `-k x² ψ_xx + k³ ψ_kk + 2k² ψ_k + (x + k)`, identically zero for x, k > 0.
pub fn pde_residual_corrected(p: &PsiPoint) -> f64 {
    pde_lhs(p) + (p.x + p.k)
}

fn pde_lhs(p: &PsiPoint) -> f64 {
    let PsiPoint {
        k,
        x,
        psi_xx,
        psi_k,
        psi_kk,
        ..
    } = *p;
    -k * x * x * psi_xx + k.powi(3) * psi_kk + 2.0 * k * k * psi_k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(k: f64, m: GammaMethod) -> GammaKEvaluator {
        GammaKEvaluator::new(k, m).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn scaling_examples() {
        for &k in &[0.5, 1.0, 2.0, 3.0] {
            assert!((eval(k, GammaMethod::Scaling).scaling(k).unwrap().value - 1.0).abs() < 1e-14);
        }
        assert!(
            rel(
                eval(1.0, GammaMethod::Scaling).scaling(5.0).unwrap().value,
                24.0
            ) < 1e-14
        );
        let g = eval(2.0, GammaMethod::Scaling).scaling(1.0).unwrap().value;
        assert!(rel(g, (PI / 2.0).sqrt()) < 1e-14);
    }

    #[test]
    fn integral_examples() {
        assert!(
            (eval(1.0, GammaMethod::Integral)
                .integral(1.0)
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-10
        );
        assert!(
            (eval(2.0, GammaMethod::Integral)
                .integral(2.0)
                .unwrap()
                .value
                - 1.0)
                .abs()
                < 1e-10
        );
        let e = eval(3.0, GammaMethod::Integral);
        let i = e.integral(1.7).unwrap();
        let s = e.scaling(1.7).unwrap();
        assert!(rel(i.value, s.value) < 1e-10);
    }

    #[test]
    fn limit_examples() {
        let r = eval(1.0, GammaMethod::Limit).limit(1.0, 1_000_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5, "{r:?}");
        let r = eval(2.0, GammaMethod::Limit).limit(2.0, 1_000_000).unwrap();
        assert!((r.value - 1.0).abs() <= r.err_estimate.max(1e-9));
        let r = eval(1.0, GammaMethod::Limit)
            .limit(-0.5, 1_000_000)
            .unwrap();
        let expect = -2.0 * PI.sqrt();
        assert!(rel(r.value, expect) < 1e-5, "{r:?}");
    }

    #[test]
    fn limit_error_estimate_tracks_convergence() {
        let e = eval(1.0, GammaMethod::Limit);
        let coarse = e.limit(2.5, 1_000).unwrap();
        let fine = e.limit(2.5, 100_000).unwrap();
        let exact = e.scaling(2.5).unwrap().value;
        assert!(fine.err_estimate < coarse.err_estimate);
        assert!((fine.value - exact).abs() <= 2.0 * fine.err_estimate);
    }

    #[test]
    fn product_examples() {
        let r = eval(1.0, GammaMethod::Product)
            .product(1.0, 10_000)
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = eval(2.0, GammaMethod::Product)
            .product(2.0, 10_000)
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = eval(1.0, GammaMethod::Product)
            .product(0.5, 10_000)
            .unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-5);
        let r = eval(1.0, GammaMethod::Product)
            .product(-0.5, 10_000)
            .unwrap();
        assert!(rel(r.value, -2.0 * PI.sqrt()) < 1e-6);
    }

    #[test]
    fn poles_are_typed() {
        let e = eval(2.0, GammaMethod::Limit);
        match e.limit(-4.0, 100) {
            Err(Error::Pole { pole, .. }) => assert_eq!(pole, -4.0),
            other => panic!("expected pole, got {other:?}"),
        }
        assert!(matches!(e.product(0.0, 100), Err(Error::Pole { .. })));
        assert!(matches!(e.scaling(-6.0), Err(Error::Pole { .. })));
        assert!(matches!(e.scaling(-1.0), Err(Error::Domain(_))));
        assert!(matches!(e.integral(-0.5), Err(Error::Domain(_))));
        assert!(GammaKEvaluator::new(0.0, GammaMethod::Scaling).is_err());
        assert!(GammaKEvaluator::new(-1.0, GammaMethod::Scaling).is_err());
    }

    #[test]
    fn stirling_examples() {
        let rel_err = |k: f64, x: f64| {
            let exact = gamma_k(k, x + 1.0).unwrap();
            (exact - gamma_k_stirling(k, x).unwrap()).abs() / exact
        };
        let e10 = rel_err(1.0, 10.0);
        assert!((e10 - 0.0083).abs() < 0.0002, "{e10}");
        let s = gamma_k_stirling(1.0, 10.0).unwrap();
        assert!((s / 3.5987e6 - 1.0).abs() < 1e-4);
        let e100 = rel_err(1.0, 100.0);
        assert!((e100 - 0.00083).abs() < 0.00002, "{e100}");
        assert!(rel_err(2.0, 50.0) < rel_err(2.0, 10.0));
    }

    #[test]
    fn dk_against_finite_difference() {
        let p = PrecisionProfile::default();
        for &(k, x) in &[(1.0, 1.0), (2.0, 0.5), (1.0, 3.0)] {
            let h = 1e-5;
            let fd =
                (gamma_k(k + h, x + 1.0).unwrap() - gamma_k(k - h, x + 1.0).unwrap()) / (2.0 * h);
            let closed = gamma_k_dk(k, x, &p).unwrap().value;
            assert!(rel(closed, fd) < 1e-5, "k = {k}, x = {x}: {closed} vs {fd}");
        }
    }

    #[test]
    fn psi_point_examples() {
        let p = PrecisionProfile::default();
        let a = psi_point(1.0, 1.0, &p).unwrap();
        assert!(a.psi.abs() < 1e-14);
        assert!((a.psi_xx - PI * PI / 6.0).abs() < 1e-12);
        // ψ_x(1, 1) is the digamma value -γ
        assert!((a.psi_x + EULER_GAMMA).abs() < 1e-12);
        let b = psi_point(1.0, 2.0, &p).unwrap();
        assert!(b.psi.abs() < 1e-14);
        let c = psi_point(2.0, 2.0, &p).unwrap();
        assert!(c.psi.abs() < 1e-14);
        let h = 1e-5;
        let fd =
            (log_gamma_k(2.0, 2.0 + h).unwrap() - log_gamma_k(2.0, 2.0 - h).unwrap()) / (2.0 * h);
        assert!((c.psi_x - fd).abs() < 1e-8);
        let fdk =
            (log_gamma_k(2.0 + h, 2.0).unwrap() - log_gamma_k(2.0 - h, 2.0).unwrap()) / (2.0 * h);
        assert!((c.psi_k - fdk).abs() < 1e-8);
    }

    #[test]
    fn printed_pde_residual_is_k_times_x_minus_one() {
        let p = PrecisionProfile::default();
        for &(k, x) in &[(1.0, 1.0), (2.0, 3.0), (0.5, 0.7)] {
            let point = psi_point(k, x, &p).unwrap();
            let printed = pde_residual(&point);
            assert!(
                (printed - k * (x - 1.0)).abs() < 1e-4,
                "k = {k}, x = {x}: {printed}"
            );
            assert!(pde_residual_corrected(&point).abs() < 1e-4);
        }
    }

    #[test]
    fn rescale_and_parametric_integral() {
        let p = PrecisionProfile::default();
        let direct = gamma_k(0.5, 2.5).unwrap();
        assert!(rel(gamma_k_rescale(2.5, 0.5, 3.0).unwrap(), direct) < 1e-12);
        for &a in &[0.5, 2.0] {
            let v = gamma_k_parametric_integral(2.0, 1.3, a, &p).unwrap().value;
            assert!(rel(v, gamma_k(2.0, 1.3).unwrap()) < 1e-9);
        }
        assert!(gamma_k_parametric_integral(2.0, 1.3, -1.0, &p).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in GammaMethod::ALL {
            assert_eq!(m.as_str().parse::<GammaMethod>().unwrap(), m);
        }
    }
}
