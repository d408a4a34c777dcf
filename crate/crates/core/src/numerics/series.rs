use super::{CompensatedSum, EvalResult, Method, PrecisionProfile, BERNOULLI_EVEN};
use crate::error::{Error, Result};

const QUIET_TERMS: usize = 3;

/// Sums `term(0) + term(1) + …`.
///
/// `term` is called with n = 0, 1, 2, … in order, so it may carry recurrence
/// state. Summation stops after three consecutive terms below
/// `abs_tol + rel_tol·|partial sum|`; the error estimate is the magnitude of
/// the first omitted term. That estimate assumes terms decay at least
/// geometrically; for slowly decaying tails it is optimistic.
pub fn sum_series<T>(mut term: T, profile: &PrecisionProfile) -> Result<EvalResult>
where
    T: FnMut(usize) -> f64,
{
    let mut acc = CompensatedSum::new();
    let mut quiet = 0;
    for n in 0..profile.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::Overflow(format!("series term {n} is not finite")));
        }
        acc.add(t);
        let threshold = profile.abs_tol + profile.rel_tol * acc.value().abs();
        if t.abs() < threshold {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                let omitted = term(n + 1).abs();
                return Ok(EvalResult::new(acc.value(), omitted, Method::Series, n + 1));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergent {
        what: "series summation",
        iterations: profile.max_terms,
        err_estimate: f64::NAN,
    })
}

/// `Σ_{n≥1} (1/(n + u) - 1/n)` for u > -1.
///
/// Direct sum of the first terms, then an Euler–Maclaurin tail with the
/// closed-form antiderivative `-log(1 + u/M)`.
pub fn shifted_harmonic(u: f64, profile: &PrecisionProfile) -> Result<EvalResult> {
    if !(u > -1.0) || !u.is_finite() {
        return Err(Error::domain(format!(
            "shifted_harmonic requires u > -1, got {u}"
        )));
    }
    let mut cutoff = 20usize;
    loop {
        let (value, next) = shifted_harmonic_at(u, cutoff);
        if next <= profile.tolerance_for(value) || 2 * cutoff > profile.max_terms {
            if next > profile.tolerance_for(value) {
                return Err(Error::NonConvergent {
                    what: "shifted harmonic Euler-Maclaurin",
                    iterations: cutoff,
                    err_estimate: next,
                });
            }
            let err = next + super::rounding_floor(value, 4.0 * cutoff as f64);
            return Ok(EvalResult::new(value, err, Method::EulerMaclaurin, cutoff));
        }
        cutoff *= 2;
    }
}

fn shifted_harmonic_at(u: f64, cutoff: usize) -> (f64, f64) {
    let m = cutoff as f64;
    let mut acc = CompensatedSum::new();
    for n in 1..cutoff {
        let n = n as f64;
        // 1/(n+u) - 1/n without cancellation
        acc.add(-u / (n * (n + u)));
    }
    acc.add(-(u / m).ln_1p());
    acc.add(0.5 * (-u / (m * (m + u))));
    // -B_{2j}/(2j)! f^{(2j-1)}(M) with f^{(2j-1)}(t) = -(2j-1)! [(t+u)^{-2j} - t^{-2j}]
    let mut next = 0.0;
    for (idx, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = (idx + 1) as i32;
        let term = b / (2 * j) as f64 * ((m + u).powi(-2 * j) - m.powi(-2 * j));
        if idx + 1 == BERNOULLI_EVEN.len() {
            next = term.abs();
        } else {
            acc.add(term);
        }
    }
    (acc.value(), next)
}
