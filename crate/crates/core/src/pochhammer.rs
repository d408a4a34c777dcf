//! The Pochhammer k-symbol `(x)_{n,k} = x (x + k) (x + 2k) … (x + (n-1)k)`.
//!
//! Floating-point routines live at the top level; [`exact`] repeats the
//! identities over big rationals so they can be checked with equality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Names one k-symbol value `(x)_{n,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PochhammerSpec {
    pub x: f64,
    pub n: u32,
    pub k: f64,
}

impl PochhammerSpec {
    pub fn new(x: f64, n: u32, k: f64) -> Self {
        PochhammerSpec { x, n, k }
    }

    fn check_finite(&self) -> Result<()> {
        if !self.x.is_finite() || !self.k.is_finite() {
            return Err(Error::domain("Pochhammer arguments must be finite"));
        }
        Ok(())
    }
}

/// A real number stored as sign and log-magnitude. `sign == 0` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }
}

/// Direct product. The empty product (n = 0) is 1.
pub fn pochhammer_k(spec: PochhammerSpec) -> Result<f64> {
    spec.check_finite()?;
    let mut value = 1.0;
    for j in 0..spec.n {
        let factor = spec.x + f64::from(j) * spec.k;
        if factor == 0.0 {
            return Ok(0.0);
        }
        value *= factor;
    }
    if !value.is_finite() {
        return Err(Error::Overflow(format!(
            "(x)_(n,k) for x = {}, n = {}, k = {} exceeds f64 range; use pochhammer_k_log",
            spec.x, spec.n, spec.k
        )));
    }
    Ok(value)
}

/// Log-space product with the sign tracked separately.
pub fn pochhammer_k_log(spec: PochhammerSpec) -> Result<SignedLog> {
    spec.check_finite()?;
    let mut sign: i8 = 1;
    let mut ln_abs = 0.0;
    for j in 0..spec.n {
        let factor = spec.x + f64::from(j) * spec.k;
        if factor == 0.0 {
            return Ok(SignedLog {
                sign: 0,
                ln_abs: f64::NEG_INFINITY,
            });
        }
        if factor < 0.0 {
            sign = -sign;
        }
        ln_abs += factor.abs().ln();
    }
    Ok(SignedLog { sign, ln_abs })
}

/// `e_s^m(1, 2, …, m)` for s = 0..=m, built with
/// `e_s^m = e_s^{m-1} + m·e_{s-1}^{m-1}`.
pub fn elementary_symmetric_of_naturals(m: u32) -> Vec<f64> {
    let mut e = vec![1.0];
    for step in 1..=m {
        let mut next = vec![0.0; e.len() + 1];
        for (s, slot) in next.iter_mut().enumerate() {
            let keep = e.get(s).copied().unwrap_or(0.0);
            let lift = if s > 0 {
                e[s - 1] * f64::from(step)
            } else {
                0.0
            };
            *slot = keep + lift;
        }
        e = next;
    }
    e
}

/// `(x)_{n,k} = Σ_{s=0}^{n-1} e_s^{n-1}(1, …, n-1) k^s x^{n-s}`.
pub fn pochhammer_via_symmetric(spec: PochhammerSpec) -> Result<f64> {
    spec.check_finite()?;
    if spec.n == 0 {
        return Ok(1.0);
    }
    let e = elementary_symmetric_of_naturals(spec.n - 1);
    let mut total = 0.0;
    for (s, coeff) in e.iter().enumerate() {
        let s = s as i32;
        total += coeff * spec.k.powi(s) * spec.x.powi(spec.n as i32 - s);
    }
    if !total.is_finite() {
        return Err(Error::Overflow(
            "symmetric-function expansion overflowed".into(),
        ));
    }
    Ok(total)
}

/// `∂/∂k (x)_{n,k} = Σ_{s=1}^{n-1} s (x)_{s,k} (x + (s+1)k)_{n-1-s,k}`.
pub fn pochhammer_dk(spec: PochhammerSpec) -> Result<f64> {
    spec.check_finite()?;
    if spec.n == 0 {
        return Err(Error::domain("pochhammer_dk requires n >= 1"));
    }
    let PochhammerSpec { x, n, k } = spec;
    let mut total = 0.0;
    for s in 1..n {
        let head = pochhammer_k(PochhammerSpec::new(x, s, k))?;
        let tail = pochhammer_k(PochhammerSpec::new(x + f64::from(s + 1) * k, n - 1 - s, k))?;
        total += f64::from(s) * head * tail;
    }
    Ok(total)
}

/// `(x)_{n,s} = (s/k)^n (kx/s)_{n,k}`: a k-symbol with step `s` evaluated
/// through one with step `k`.
pub fn pochhammer_rescale(x: f64, n: u32, s: f64, k: f64) -> Result<f64> {
    if !(s > 0.0) || !(k > 0.0) {
        return Err(Error::domain("pochhammer_rescale requires s > 0 and k > 0"));
    }
    let inner = pochhammer_k(PochhammerSpec::new(k * x / s, n, k))?;
    let value = (s / k).powi(n as i32) * inner;
    if !value.is_finite() {
        return Err(Error::Overflow("rescaled k-symbol overflowed".into()));
    }
    Ok(value)
}

pub mod exact {
    //! Big-rational versions of the k-symbol identities.

    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use crate::error::{Error, Result};

    pub fn pochhammer_k(x: &BigRational, n: u32, k: &BigRational) -> BigRational {
        let mut value = BigRational::one();
        let mut factor = x.clone();
        for _ in 0..n {
            value *= &factor;
            factor += k;
        }
        value
    }

    /// `e_s^m(1, …, m)` as exact integers (unsigned Stirling numbers of the
    /// first kind, shifted).
    pub fn elementary_symmetric_of_naturals(m: u32) -> Vec<BigInt> {
        let mut e = vec![BigInt::one()];
        for step in 1..=m {
            let step = BigInt::from(step);
            let mut next = vec![BigInt::zero(); e.len() + 1];
            for (s, slot) in next.iter_mut().enumerate() {
                if let Some(keep) = e.get(s) {
                    *slot += keep;
                }
                if s > 0 {
                    *slot += &e[s - 1] * &step;
                }
            }
            e = next;
        }
        e
    }

    pub fn pochhammer_via_symmetric(x: &BigRational, n: u32, k: &BigRational) -> BigRational {
        if n == 0 {
            return BigRational::one();
        }
        let e = elementary_symmetric_of_naturals(n - 1);
        let mut total = BigRational::zero();
        for (s, coeff) in e.into_iter().enumerate() {
            let term = BigRational::from_integer(coeff)
                * num_traits::pow(k.clone(), s)
                * num_traits::pow(x.clone(), n as usize - s);
            total += term;
        }
        total
    }

    pub fn pochhammer_dk(x: &BigRational, n: u32, k: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for s in 1..n {
            let shifted = x + k * BigRational::from_integer(BigInt::from(s + 1));
            total += BigRational::from_integer(BigInt::from(s))
                * pochhammer_k(x, s, k)
                * pochhammer_k(&shifted, n - 1 - s, k);
        }
        total
    }

    pub fn pochhammer_rescale(
        x: &BigRational,
        n: u32,
        s: &BigRational,
        k: &BigRational,
    ) -> Result<BigRational> {
        if s <= &BigRational::zero() || k <= &BigRational::zero() {
            return Err(Error::domain("pochhammer_rescale requires s > 0 and k > 0"));
        }
        let ratio = s / k;
        let inner = pochhammer_k(&(k * x / s), n, k);
        Ok(num_traits::pow(ratio, n as usize) * inner)
    }

    /// Parses `"3"`, `"-2/7"` or a terminating decimal such as `"0.25"`.
    pub fn parse_rational(text: &str) -> Result<BigRational> {
        let text = text.trim();
        let bad = || Error::domain(format!("'{text}' is not a rational number"));
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(BigRational::new(num, den));
        }
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(BigRational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn empty_product_is_one() {
        for &(x, k) in &[(2.5, 1.0), (-3.0, 0.5), (0.0, 7.0)] {
            assert_eq!(pochhammer_k(PochhammerSpec::new(x, 0, k)).unwrap(), 1.0);
        }
    }

    #[test]
    fn worked_products() {
        assert_eq!(
            pochhammer_k(PochhammerSpec::new(2.0, 3, 3.0)).unwrap(),
            80.0
        );
        let odd: f64 = (0..9).map(|j| 3.0 + 2.0 * j as f64).product();
        assert_eq!(
            odd,
            3.0 * 5.0 * 7.0 * 9.0 * 11.0 * 13.0 * 15.0 * 17.0 * 19.0
        );
        assert_eq!(pochhammer_k(PochhammerSpec::new(3.0, 9, 2.0)).unwrap(), odd);
    }

    #[test]
    fn symmetric_expansion_examples() {
        let x: f64 = 1.7;
        let k: f64 = 0.3;
        let two = pochhammer_via_symmetric(PochhammerSpec::new(x, 2, k)).unwrap();
        assert!((two - (x * x + k * x)).abs() < 1e-15);
        assert_eq!(
            pochhammer_via_symmetric(PochhammerSpec::new(1.0, 3, 1.0)).unwrap(),
            6.0
        );
        let direct = pochhammer_k(PochhammerSpec::new(2.0, 4, 0.5)).unwrap();
        let expanded = pochhammer_via_symmetric(PochhammerSpec::new(2.0, 4, 0.5)).unwrap();
        assert!((direct - expanded).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn elementary_symmetric_small_cases() {
        // e^3(1,2,3) = [1, 6, 11, 6]
        assert_eq!(
            elementary_symmetric_of_naturals(3),
            vec![1.0, 6.0, 11.0, 6.0]
        );
        let exact = exact::elementary_symmetric_of_naturals(4);
        let expect: Vec<BigInt> = [1, 10, 35, 50, 24]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(exact, expect);
    }

    #[test]
    fn dk_examples() {
        assert_eq!(
            pochhammer_dk(PochhammerSpec::new(3.3, 1, 0.4)).unwrap(),
            0.0
        );
        assert_eq!(
            pochhammer_dk(PochhammerSpec::new(1.0, 2, 1.0)).unwrap(),
            1.0
        );
        let spec = PochhammerSpec::new(2.0, 3, 0.7);
        let h = 1e-6;
        let fd = (pochhammer_k(PochhammerSpec {
            k: spec.k + h,
            ..spec
        })
        .unwrap()
            - pochhammer_k(PochhammerSpec {
                k: spec.k - h,
                ..spec
            })
            .unwrap())
            / (2.0 * h);
        let closed = pochhammer_dk(spec).unwrap();
        assert!((closed - fd).abs() <= 1e-6 * closed.abs());
        assert!(matches!(
            pochhammer_dk(PochhammerSpec::new(1.0, 0, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rescale_examples() {
        let x = 1.9;
        for n in 0..6 {
            let a = pochhammer_rescale(x, n, 0.8, 0.8).unwrap();
            let b = pochhammer_k(PochhammerSpec::new(x, n, 0.8)).unwrap();
            assert!((a - b).abs() <= 1e-14 * b.abs());
        }
        assert!((pochhammer_rescale(1.0, 3, 2.0, 1.0).unwrap() - 15.0).abs() < 1e-12);
        assert!((pochhammer_rescale(3.0, 2, 0.5, 2.0).unwrap() - 10.5).abs() < 1e-12);
        assert!(pochhammer_rescale(1.0, 2, 0.0, 1.0).is_err());
    }

    #[test]
    fn overflow_and_log_space() {
        let spec = PochhammerSpec::new(10.0, 400, 10.0);
        assert!(matches!(pochhammer_k(spec), Err(Error::Overflow(_))));
        let log = pochhammer_k_log(spec).unwrap();
        assert_eq!(log.sign, 1);
        // 10^400 · 400!
        let expect = 400.0 * 10f64.ln() + (1..=400).map(|i| (i as f64).ln()).sum::<f64>();
        assert!((log.ln_abs - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn log_space_tracks_sign_and_zero() {
        let neg = pochhammer_k_log(PochhammerSpec::new(-2.5, 3, 1.0)).unwrap();
        // (-2.5)(-1.5)(-0.5) = -1.875
        assert_eq!(neg.sign, -1);
        assert!((neg.to_f64() + 1.875).abs() < 1e-14);
        let zero = pochhammer_k_log(PochhammerSpec::new(-2.0, 4, 1.0)).unwrap();
        assert_eq!(zero.sign, 0);
        assert_eq!(zero.to_f64(), 0.0);
        assert_eq!(
            pochhammer_k(PochhammerSpec::new(-2.0, 4, 1.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn exact_identities() {
        let x = rat(-5, 2);
        let k = rat(1, 2);
        for n in 0..8 {
            let direct = exact::pochhammer_k(&x, n, &k);
            assert_eq!(exact::pochhammer_via_symmetric(&x, n, &k), direct);
            let s = rat(3, 1);
            assert_eq!(
                exact::pochhammer_rescale(&x, n, &s, &k).unwrap(),
                exact::pochhammer_k(&x, n, &s)
            );
        }
        // d/dk [x(x+k)(x+2k)] = x(x+2k) + 2x(x+k)
        let x = rat(2, 1);
        let k = rat(7, 10);
        let expect = &x * (&x + &k * rat(2, 1)) + rat(2, 1) * &x * (&x + &k);
        assert_eq!(exact::pochhammer_dk(&x, 3, &k), expect);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(exact::parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(exact::parse_rational("-2/7").unwrap(), rat(-2, 7));
        assert_eq!(exact::parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(exact::parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(exact::parse_rational("1e3").is_err());
        assert!(exact::parse_rational("1/0").is_err());
        assert!(exact::parse_rational(".").is_err());
    }
}
