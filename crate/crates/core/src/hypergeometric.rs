//! The k-hypergeometric series
//! `F(a, k, b, s)(x) = Σ_n (a₁)_{n,k₁}…(a_p)_{n,k_p} / ((b₁)_{n,s₁}…(b_q)_{n,s_q}) · xⁿ/n!`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_k::log_gamma_k;
use crate::numerics::{
    quad_halfline_propagating, sum_series, EvalResult, Method, PrecisionProfile,
};

/// Deepest nesting accepted by [`integral_representation_check`].
pub const MAX_INTEGRAL_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricSpec {
    pub a: Vec<f64>,
    pub k: Vec<f64>,
    pub b: Vec<f64>,
    pub s: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceClass {
    /// p ≤ q: converges for every x.
    Entire,
    /// p = q + 1: converges for |x| below the radius.
    Radius(f64),
    /// p > q + 1: diverges for every x ≠ 0.
    Divergent,
}

impl ConvergenceClass {
    pub fn radius(self) -> f64 {
        match self {
            ConvergenceClass::Entire => f64::INFINITY,
            ConvergenceClass::Radius(r) => r,
            ConvergenceClass::Divergent => 0.0,
        }
    }
}

impl HypergeometricSpec {
    pub fn new(a: Vec<f64>, k: Vec<f64>, b: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        let spec = HypergeometricSpec { a, k, b, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.k.len() || self.b.len() != self.s.len() {
            return Err(Error::domain(format!(
                "parameter lengths differ: |a| = {}, |k| = {}, |b| = {}, |s| = {}",
                self.a.len(),
                self.k.len(),
                self.b.len(),
                self.s.len()
            )));
        }
        let all = self.a.iter().chain(&self.k).chain(&self.b).chain(&self.s);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::domain("hypergeometric parameters must be finite"));
        }
        if let Some(bad) = self.k.iter().chain(&self.s).find(|&&v| v <= 0.0) {
            return Err(Error::domain(format!(
                "step parameters must be positive, got {bad}"
            )));
        }
        for (&b, &s) in self.b.iter().zip(&self.s) {
            let ratio = b / s;
            if ratio <= 0.0 && (ratio - ratio.round()).abs() <= 1e-12 * ratio.abs().max(1.0) {
                return Err(Error::domain(format!(
                    "denominator parameter b = {b} is a non-positive multiple of its step {s}"
                )));
            }
        }
        Ok(())
    }

    /// `F(a/k, 1, b/s, 1)`, the classical series the transfer maps onto.
    pub fn classical(&self) -> Self {
        HypergeometricSpec {
            a: self.a.iter().zip(&self.k).map(|(a, k)| a / k).collect(),
            k: vec![1.0; self.p()],
            b: self.b.iter().zip(&self.s).map(|(b, s)| b / s).collect(),
            s: vec![1.0; self.q()],
        }
    }

    /// `c_{n+1} / c_n` for the series coefficients `c_n` of xⁿ.
    fn coefficient_ratio(&self, n: usize) -> f64 {
        let nf = n as f64;
        let num: f64 = self
            .a
            .iter()
            .zip(&self.k)
            .map(|(a, k)| a + nf * k)
            .product();
        let den: f64 = self
            .b
            .iter()
            .zip(&self.s)
            .map(|(b, s)| b + nf * s)
            .product();
        num / (den * (nf + 1.0))
    }

    /// Same spec without its last numerator pair.
    fn peeled(&self) -> (Self, f64, f64) {
        let mut inner = self.clone();
        let a = inner.a.pop().expect("peeled requires p ≥ 1");
        let k = inner.k.pop().expect("peeled requires p ≥ 1");
        (inner, a, k)
    }
}

pub fn classify(spec: &HypergeometricSpec) -> ConvergenceClass {
    let (p, q) = (spec.p(), spec.q());
    if p <= q {
        ConvergenceClass::Entire
    } else if p == q + 1 {
        let s_bar: f64 = spec.s.iter().product();
        let k_bar: f64 = spec.k.iter().product();
        ConvergenceClass::Radius(s_bar / k_bar)
    } else {
        ConvergenceClass::Divergent
    }
}

pub fn evaluate(
    spec: &HypergeometricSpec,
    x: f64,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    spec.validate()?;
    if !x.is_finite() {
        return Err(Error::domain("x must be finite"));
    }
    let class = classify(spec);
    match class {
        ConvergenceClass::Divergent if x != 0.0 => {
            return Err(Error::DivergentSeries {
                p: spec.p(),
                q: spec.q(),
            });
        }
        ConvergenceClass::Radius(r) if x.abs() >= r => {
            return Err(Error::OutsideRadius { x, radius: r });
        }
        _ => {}
    }

    let mut current = 1.0;
    let mut last = (0.0f64, 0.0f64);
    let mut biggest = 0.0f64;
    let raw = sum_series(
        |n| {
            let t = if n == 0 {
                1.0
            } else {
                current *= x * spec.coefficient_ratio(n - 1);
                current
            };
            last = (last.1, t);
            biggest = biggest.max(t.abs());
            t
        },
        profile,
    )?;

    // The first omitted term underestimates a tail that decays like ρⁿ, so
    // scale it by 1/(1 - ρ) with ρ the larger of the observed and limiting ratios.
    let observed = if last.0 != 0.0 {
        (last.1 / last.0).abs()
    } else {
        0.0
    };
    let limiting = (x / class.radius()).abs();
    let rho = observed.max(limiting).min(0.999);
    let tail = raw.err_estimate / (1.0 - rho);
    let rounding = 4.0 * f64::EPSILON * biggest * (raw.terms_or_nodes_used as f64).sqrt();
    Ok(EvalResult::new(
        raw.value,
        tail + rounding,
        Method::Series,
        raw.terms_or_nodes_used,
    ))
}

/// Evaluates `F(a/k, 1, b/s, 1)(x k̄ / s̄)`, which equals `F(a, k, b, s)(x)`.
pub fn transfer_classical(
    spec: &HypergeometricSpec,
    x: f64,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    spec.validate()?;
    let k_bar: f64 = spec.k.iter().product();
    let s_bar: f64 = spec.s.iter().product();
    evaluate(&spec.classical(), x * k_bar / s_bar, profile)
}

/// Coefficient residual of
/// `D(s₁D + b₁ - s₁)…(s_qD + b_q - s_q) y = x(k₁D + a₁)…(k_pD + a_p) y`
/// with `D = x d/dx`, for y the series truncated at `degree`.
///
/// On xⁿ the left side contributes `n ∏(s_i n + b_i - s_i) c_n` and the right
/// side `∏(k_j (n-1) + a_j) c_{n-1}`. The largest mismatch over n < degree
/// is divided by the largest of those operator coefficients, so the result
/// is a relative figure that does not grow with the size of the factors.
pub fn ode_residual(spec: &HypergeometricSpec, degree: usize) -> Result<f64> {
    spec.validate()?;
    if degree < 2 {
        return Err(Error::domain("ode_residual needs degree ≥ 2"));
    }
    let mut c = Vec::with_capacity(degree + 1);
    c.push(1.0);
    for n in 0..degree {
        let next = c[n] * spec.coefficient_ratio(n);
        c.push(next);
    }
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for n in 1..degree {
        let nf = n as f64;
        let left_factor: f64 = spec
            .b
            .iter()
            .zip(&spec.s)
            .map(|(b, s)| s * nf + b - s)
            .product();
        let right_factor: f64 = spec
            .a
            .iter()
            .zip(&spec.k)
            .map(|(a, k)| k * (nf - 1.0) + a)
            .product();
        let left = nf * left_factor * c[n];
        let right = right_factor * c[n - 1];
        worst = worst.max((left - right).abs());
        scale = scale.max(left.abs()).max(right.abs());
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Evaluates the series through nested integrals, peeling one numerator pair
/// per level:
/// `F(a, k, b, s)(x) = Γ_{k_p}(a_p)^{-1} ∫₀^∞ e^{-t^{k_p}/k_p} t^{a_p-1} F(a', k', b, s)(x t^{k_p}) dt`,
/// where a', k' drop the last entry. The innermost level is the p = 0 series.
pub fn integral_representation_check(
    spec: &HypergeometricSpec,
    x: f64,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    spec.validate()?;
    if spec.p() > spec.q() {
        return Err(Error::domain(format!(
            "integral representation needs p ≤ q, got p = {}, q = {}",
            spec.p(),
            spec.q()
        )));
    }
    if spec.p() > MAX_INTEGRAL_DEPTH {
        return Err(Error::domain(format!(
            "integral representation limited to p ≤ {MAX_INTEGRAL_DEPTH}"
        )));
    }
    if let Some(bad) = spec.a.iter().find(|&&a| a <= 0.0) {
        return Err(Error::domain(format!(
            "integral representation needs a_j > 0, got {bad}"
        )));
    }
    nested_integral(spec, x, profile)
}

fn nested_integral(
    spec: &HypergeometricSpec,
    x: f64,
    profile: &PrecisionProfile,
) -> Result<EvalResult> {
    if spec.p() == 0 {
        return evaluate(spec, x, profile);
    }
    let (inner, a, k) = spec.peeled();
    let log_norm = log_gamma_k(k, a)?;
    let failure: Cell<Option<Error>> = Cell::new(None);
    let outer = quad_halfline_propagating(
        |t| {
            let lt = t.ln();
            let log_weight = -(k * lt).exp() / k + (a - 1.0) * lt - log_norm;
            if log_weight < -700.0 {
                return (0.0, 0.0);
            }
            let weight = log_weight.exp();
            // Where the weight is small the inner value needs proportionally
            // less absolute accuracy; the 1 + t |ln t| factor covers the
            // growth of the quadrature's own node weights.
            let inner_profile = PrecisionProfile {
                abs_tol: (profile.abs_tol / (weight * (1.0 + t * (1.0 + lt.abs())))).min(f64::MAX),
                ..*profile
            };
            match nested_integral(&inner, x * (k * lt).exp(), &inner_profile) {
                Ok(r) => (weight * r.value, weight * r.err_estimate),
                Err(e) => {
                    let previous = failure.take();
                    failure.set(previous.or(Some(e)));
                    (0.0, 0.0)
                }
            }
        },
        profile,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(EvalResult::new(
        outer.value,
        outer.err_estimate,
        Method::Integral,
        outer.terms_or_nodes_used,
    ))
}

/// `n! c_n = (a)_{n,k} / (b)_{n,s}`, the n-th derivative at x = 0.
pub fn coefficient(spec: &HypergeometricSpec, n: usize) -> Result<f64> {
    spec.validate()?;
    let mut value = 1.0;
    for m in 0..n {
        let mf = m as f64;
        for (a, k) in spec.a.iter().zip(&spec.k) {
            value *= a + mf * k;
        }
        for (b, s) in spec.b.iter().zip(&spec.s) {
            value /= b + mf * s;
        }
    }
    if !value.is_finite() {
        return Err(Error::Overflow(format!("coefficient {n} overflows f64")));
    }
    Ok(value)
}

pub mod exact {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::error::{Error, Result};

    /// Exact `(a)_{n,k} / (b)_{n,s}`, built factor by factor.
    pub fn coefficient(
        a: &[BigRational],
        k: &[BigRational],
        b: &[BigRational],
        s: &[BigRational],
        n: u32,
    ) -> Result<BigRational> {
        if a.len() != k.len() || b.len() != s.len() {
            return Err(Error::domain("parameter lengths differ"));
        }
        let mut value = BigRational::one();
        for m in 0..n {
            let m = BigRational::from_integer(m.into());
            for (aj, kj) in a.iter().zip(k) {
                value *= aj + &m * kj;
            }
            for (bi, si) in b.iter().zip(s) {
                let factor = bi + &m * si;
                if factor.is_zero() {
                    return Err(Error::domain("denominator Pochhammer factor vanishes"));
                }
                value /= factor;
            }
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pochhammer;
    use num_rational::BigRational;
    use std::f64::consts::E;

    fn h(a: &[f64], k: &[f64], b: &[f64], s: &[f64]) -> HypergeometricSpec {
        HypergeometricSpec::new(a.to_vec(), k.to_vec(), b.to_vec(), s.to_vec()).unwrap()
    }

    fn p() -> PrecisionProfile {
        PrecisionProfile::default()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&h(&[], &[], &[], &[])), ConvergenceClass::Entire);
        assert_eq!(
            classify(&h(&[1.0], &[2.0], &[], &[])),
            ConvergenceClass::Radius(0.5)
        );
        assert_eq!(
            classify(&h(&[1.0, 1.0], &[1.0, 2.0], &[1.0], &[3.0])),
            ConvergenceClass::Radius(1.5)
        );
        assert_eq!(
            classify(&h(&[1.0, 1.0], &[1.0, 1.0], &[], &[])),
            ConvergenceClass::Divergent
        );
    }

    #[test]
    fn evaluate_examples() {
        let v = evaluate(&h(&[], &[], &[], &[]), 1.0, &p()).unwrap().value;
        assert!((v - E).abs() < 1e-13);
        let v = evaluate(&h(&[2.0], &[2.0], &[], &[]), 0.25, &p())
            .unwrap()
            .value;
        assert!((v - 2.0).abs() < 1e-9);
        let v = evaluate(&h(&[1.0], &[1.0], &[1.0], &[1.0]), 0.7, &p())
            .unwrap()
            .value;
        assert!((v - 0.7f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn error_estimate_covers_slow_tail() {
        // 1/(1 - 0.9) as a geometric series
        let r = evaluate(&h(&[1.0], &[1.0], &[], &[]), 0.9, &p()).unwrap();
        assert!((r.value - 10.0).abs() <= r.err_estimate, "{r:?}");
    }

    #[test]
    fn refuses_outside_domain() {
        let geometric = h(&[2.0], &[2.0], &[], &[]);
        assert!(evaluate(&geometric, 0.45, &p()).is_ok());
        assert!(matches!(
            evaluate(&geometric, 0.55, &p()),
            Err(Error::OutsideRadius { .. })
        ));
        let divergent = h(&[1.0, 1.0], &[1.0, 1.0], &[], &[]);
        assert!(matches!(
            evaluate(&divergent, 0.1, &p()),
            Err(Error::DivergentSeries { p: 2, q: 0 })
        ));
        assert_eq!(evaluate(&divergent, 0.0, &p()).unwrap().value, 1.0);
    }

    #[test]
    fn validation() {
        assert!(HypergeometricSpec::new(vec![1.0], vec![], vec![], vec![]).is_err());
        assert!(HypergeometricSpec::new(vec![1.0], vec![-1.0], vec![], vec![]).is_err());
        assert!(HypergeometricSpec::new(vec![], vec![], vec![-4.0], vec![2.0]).is_err());
        assert!(HypergeometricSpec::new(vec![], vec![], vec![0.0], vec![2.0]).is_err());
        assert!(HypergeometricSpec::new(vec![], vec![], vec![-3.0], vec![2.0]).is_ok());
    }

    #[test]
    fn transfer_examples() {
        let unit = h(&[1.5], &[1.0], &[2.5], &[1.0]);
        let a = evaluate(&unit, 0.8, &p()).unwrap();
        let b = transfer_classical(&unit, 0.8, &p()).unwrap();
        assert_eq!(a.value, b.value);
        let v = transfer_classical(&h(&[2.0], &[2.0], &[], &[]), 0.25, &p())
            .unwrap()
            .value;
        assert!((v - 2.0).abs() < 1e-9);
        let spec = h(&[1.0, 2.0], &[1.0, 2.0], &[3.0], &[3.0]);
        let a = evaluate(&spec, 0.3, &p()).unwrap();
        let b = transfer_classical(&spec, 0.3, &p()).unwrap();
        assert!((a.value - b.value).abs() <= 1e-10 * a.value.abs());
    }

    #[test]
    fn ode_residual_examples() {
        assert!(ode_residual(&h(&[], &[], &[], &[]), 10).unwrap() < 1e-15);
        assert!(ode_residual(&h(&[2.0], &[2.0], &[], &[]), 12).unwrap() < 1e-15);
        assert!(ode_residual(&h(&[1.0, 1.0], &[1.0, 3.0], &[2.0], &[2.0]), 12).unwrap() < 1e-12);
        assert!(ode_residual(&h(&[], &[], &[], &[]), 1).is_err());
    }

    #[test]
    fn ode_residual_detects_a_wrong_operator() {
        // a perturbed coefficient sequence must not satisfy the equation
        let spec = h(&[1.0], &[1.0], &[2.0], &[1.0]);
        let wrong = h(&[1.0], &[1.0], &[2.5], &[1.0]);
        let mut c = vec![1.0];
        for n in 0..8 {
            c.push(c[n] * wrong.coefficient_ratio(n));
        }
        let n = 3;
        let left = n as f64 * (n as f64 + spec.b[0] - 1.0) * c[n];
        let right = (n as f64 - 1.0 + spec.a[0]) * c[n - 1];
        assert!((left - right).abs() > 1e-3 * right.abs());
    }

    #[test]
    fn integral_examples() {
        for (spec, x) in [
            (h(&[1.0], &[1.0], &[2.0], &[1.0]), 0.5),
            (h(&[2.0], &[2.0], &[3.0], &[2.0]), 1.0),
        ] {
            let series = evaluate(&spec, x, &p()).unwrap();
            let quad = integral_representation_check(&spec, x, &p()).unwrap();
            assert!(
                (series.value - quad.value).abs() < 1e-8 * series.value.abs(),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn integral_preconditions() {
        let wide = h(&[1.0], &[1.0], &[], &[]);
        assert!(integral_representation_check(&wide, 0.1, &p()).is_err());
        let negative = h(&[-0.5], &[1.0], &[1.0], &[1.0]);
        assert!(integral_representation_check(&negative, 0.1, &p()).is_err());
        let deep = h(&[1.0; 4], &[1.0; 4], &[1.0; 4], &[1.0; 4]);
        assert!(integral_representation_check(&deep, 0.1, &p()).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let spec = h(&[3.0], &[2.0], &[], &[]);
        assert_eq!(coefficient(&spec, 0).unwrap(), 1.0);
        assert_eq!(coefficient(&spec, 2).unwrap(), 15.0);
        let spec = h(&[2.0], &[1.0], &[3.0], &[1.0]);
        assert!((coefficient(&spec, 3).unwrap() - 24.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn exact_coefficient_matches_pochhammer_ratio() {
        let r = |v: i64| BigRational::from_integer(v.into());
        let (a, k, b, s) = (vec![r(3), r(1)], vec![r(2), r(1)], vec![r(5)], vec![r(3)]);
        for n in 0..7u32 {
            let c = exact::coefficient(&a, &k, &b, &s, n).unwrap();
            let num = pochhammer::exact::pochhammer_k(&a[0], n, &k[0])
                * pochhammer::exact::pochhammer_k(&a[1], n, &k[1]);
            let den = pochhammer::exact::pochhammer_k(&b[0], n, &s[0]);
            assert_eq!(c * den / num, r(1));
        }
    }
}
