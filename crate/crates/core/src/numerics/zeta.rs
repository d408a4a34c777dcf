//! Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (a + n)^{-s}` continued to s ≠ 1 by
//! Euler–Maclaurin summation.

use super::{rounding_floor, CompensatedSum, EvalResult, Method, PrecisionProfile, BERNOULLI_EVEN};
use crate::error::{Error, Result};

const START_CUTOFF: usize = 20;
/// B₂ … B₁₀ are applied; B₁₂ estimates the remainder.
const APPLIED_BERNOULLI: usize = 5;

/// Hurwitz zeta for a > 0 and s ≠ 1 (reliable for s > -3).
///
/// Direct sum of the first M terms, the tail integral, the half endpoint
/// term and Bernoulli corrections through B₁₀. M starts at 20 and doubles
/// while the B₁₂ remainder estimate exceeds the tolerance.
pub fn hurwitz_zeta(s: f64, a: f64, profile: &PrecisionProfile) -> Result<EvalResult> {
    check_args(s, a)?;
    if s == 1.0 {
        return Err(Error::ZetaPole);
    }
    let mut cutoff = START_CUTOFF;
    loop {
        let (value, remainder) = euler_maclaurin(s, a, cutoff);
        let tol = profile.tolerance_for(value);
        if remainder <= tol {
            let err = remainder + rounding_floor(value, 4.0 * cutoff as f64);
            return Ok(EvalResult::new(value, err, Method::EulerMaclaurin, cutoff));
        }
        if 2 * cutoff > profile.max_terms {
            return Err(Error::NonConvergent {
                what: "Hurwitz zeta Euler-Maclaurin",
                iterations: cutoff,
                err_estimate: remainder,
            });
        }
        cutoff *= 2;
    }
}

fn check_args(s: f64, a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!(
            "Hurwitz zeta requires a > 0, got {a}"
        )));
    }
    if !s.is_finite() {
        return Err(Error::domain(format!(
            "Hurwitz zeta requires finite s, got {s}"
        )));
    }
    Ok(())
}

/// Returns (value, |first omitted Bernoulli term|).
fn euler_maclaurin(s: f64, a: f64, cutoff: usize) -> (f64, f64) {
    let mut acc = CompensatedSum::new();
    for n in 0..cutoff {
        acc.add((a + n as f64).powf(-s));
    }
    let u = a + cutoff as f64;
    acc.add(u.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * u.powf(-s));

    let mut remainder = 0.0;
    // rising product s(s+1)…(s+2j-2) and (2j)!
    let mut rising = s;
    let mut factorial = 2.0;
    for (idx, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = idx + 1;
        let term = b / factorial * rising * u.powf(-s - (2 * j) as f64 + 1.0);
        if idx < APPLIED_BERNOULLI {
            acc.add(term);
        } else {
            remainder = term.abs();
        }
        let next = (2 * j) as f64;
        rising *= (s + next - 1.0) * (s + next);
        factorial *= (next + 1.0) * (next + 2.0);
    }
    (acc.value(), remainder)
}

/// Central difference `[ζ(s₀+h, a) - ζ(s₀-h, a)] / (2h)`, evaluated term by
/// term so the O(1) parts cancel analytically instead of in floating point.
///
/// Uses the Euler–Maclaurin layout of [`hurwitz_zeta`] with M = 20. Each
/// power pair `u^{-s₀-h} - u^{-s₀+h}` is formed as `-2 u^{-s₀} sinh(h ln u)`.
pub fn hurwitz_zeta_s_difference(s0: f64, h: f64, a: f64) -> Result<f64> {
    check_args(s0, a)?;
    if !(h > 0.0) {
        return Err(Error::domain("difference step must be positive"));
    }
    let c = s0 - 1.0;
    if (c.abs() - h).abs() < f64::EPSILON || c.abs() < h {
        return Err(Error::ZetaPole);
    }
    let cutoff = START_CUTOFF;
    let mut acc = CompensatedSum::new();
    for n in 0..cutoff {
        let base = a + n as f64;
        let l = base.ln();
        acc.add(-2.0 * base.powf(-s0) * (h * l).sinh());
    }
    let u = a + cutoff as f64;
    let l = u.ln();
    // u^{1-s}/(s-1) at s0 ± h
    let numer = -2.0 * c * (h * l).sinh() - 2.0 * h * (h * l).cosh();
    acc.add(u.powf(1.0 - s0) * numer / (c * c - h * h));
    acc.add(-u.powf(-s0) * (h * l).sinh());
    // Bernoulli corrections are O(s) near s0 = 0 and small for u ≥ 20;
    // a direct difference keeps full relative precision there.
    acc.add(bernoulli_tail(s0 + h, u) - bernoulli_tail(s0 - h, u));
    Ok(acc.value() / (2.0 * h))
}

fn bernoulli_tail(s: f64, u: f64) -> f64 {
    let mut total = 0.0;
    let mut rising = s;
    let mut factorial = 2.0;
    for (idx, b) in BERNOULLI_EVEN.iter().take(APPLIED_BERNOULLI).enumerate() {
        let j = idx + 1;
        total += b / factorial * rising * u.powf(-s - (2 * j) as f64 + 1.0);
        let next = (2 * j) as f64;
        rising *= (s + next - 1.0) * (s + next);
        factorial *= (next + 1.0) * (next + 2.0);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p() -> PrecisionProfile {
        PrecisionProfile::default()
    }

    /// Partial sums with Richardson extrapolation on the 1/N tail.
    fn basel_oracle() -> f64 {
        let partial =
            |n: usize| -> f64 { (1..=n).rev().map(|i| 1.0 / (i as f64 * i as f64)).sum() };
        let (n1, n2) = (100_000usize, 200_000usize);
        let s1 = partial(n1);
        let s2 = partial(n2);
        // S(N) ≈ S - 1/N + 1/(2N²), so 2S(2N) - S(N) ≈ S - 1/(4N²)
        2.0 * s2 - s1 + 0.25 / (n1 as f64 * n1 as f64)
    }

    #[test]
    fn basel() {
        let oracle = basel_oracle();
        assert!((oracle - PI * PI / 6.0).abs() < 1e-12);
        let r = hurwitz_zeta(2.0, 1.0, &p()).unwrap();
        assert!((r.value - oracle).abs() < 1e-12);
        assert_eq!(r.method, Method::EulerMaclaurin);
    }

    #[test]
    fn shift_to_two() {
        let r = hurwitz_zeta(2.0, 2.0, &p()).unwrap();
        assert!((r.value - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn continuation_at_zero() {
        for &a in &[0.3, 1.0, 2.7] {
            let r = hurwitz_zeta(0.0, a, &p()).unwrap();
            assert!((r.value - (0.5 - a)).abs() < 1e-12, "a = {a}: {}", r.value);
            // interpolate between s = ±1e-6
            let lo = hurwitz_zeta(-1e-6, a, &p()).unwrap().value;
            let hi = hurwitz_zeta(1e-6, a, &p()).unwrap().value;
            assert!((0.5 * (lo + hi) - (0.5 - a)).abs() < 1e-10);
        }
    }

    #[test]
    fn even_zeta_values() {
        let r = hurwitz_zeta(4.0, 1.0, &p()).unwrap();
        assert!((r.value - PI.powi(4) / 90.0).abs() < 1e-13);
        // ζ(-1) = -1/12
        let r = hurwitz_zeta(-1.0, 1.0, &p()).unwrap();
        assert!((r.value + 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn shift_identity_grid() {
        for &s in &[-0.5, 0.5, 2.0, 3.0] {
            for &a in &[0.3, 1.0, 2.7] {
                let z0 = hurwitz_zeta(s, a, &p()).unwrap().value;
                let z1 = hurwitz_zeta(s, a + 1.0, &p()).unwrap().value;
                let expect = a.powf(-s);
                assert!(
                    ((z0 - z1) - expect).abs() <= 1e-10 * expect.abs().max(1.0),
                    "s = {s}, a = {a}"
                );
            }
        }
    }

    #[test]
    fn pole_and_domain() {
        assert!(matches!(hurwitz_zeta(1.0, 1.0, &p()), Err(Error::ZetaPole)));
        assert!(matches!(
            hurwitz_zeta(2.0, 0.0, &p()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hurwitz_zeta(2.0, -1.0, &p()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn s_difference_matches_log_gamma_derivative() {
        // ∂_s ζ(s, a) at s = 0 is log Γ(a) - log √(2π)
        let half_ln_2pi = 0.5 * (2.0 * PI).ln();
        for &a in &[0.5, 1.0, 2.5, 7.0] {
            let d = hurwitz_zeta_s_difference(0.0, 1e-5, a).unwrap();
            let expect = crate::numerics::log_gamma_classic(a).unwrap() - half_ln_2pi;
            assert!((d - expect).abs() < 1e-9, "a = {a}: {d} vs {expect}");
        }
    }

    #[test]
    fn s_difference_agrees_with_naive_difference_away_from_zero() {
        let a = 1.3;
        let h = 1e-3;
        let naive = (hurwitz_zeta(2.5 + h, a, &p()).unwrap().value
            - hurwitz_zeta(2.5 - h, a, &p()).unwrap().value)
            / (2.0 * h);
        let stable = hurwitz_zeta_s_difference(2.5, h, a).unwrap();
        assert!((naive - stable).abs() < 1e-9);
    }
}
