//! Double-exponential quadrature.
//!
//! The half line uses the exp-sinh map `t = exp(π/2 · sinh τ)`, the unit
//! interval the tanh-sinh map `t = (1 + tanh(π/2 · sinh τ)) / 2`. Both turn
//! endpoint singularities and super-exponential decay into doubly
//! exponentially decaying integrands in τ, where the trapezoid rule converges
//! geometrically. Levels halve the step and reuse every earlier node.

use std::f64::consts::FRAC_PI_2;

use super::{CompensatedSum, EvalResult, Method, PrecisionProfile};
use crate::error::{Error, Result};

/// |ln t| stays below ~520, so t^p and e^{-t} stay representable for moderate p.
const TAU_MAX_HALFLINE: f64 = 6.5;
/// Keeps 1 - t above the smallest normal double.
const TAU_MAX_UNIT: f64 = 6.0;
/// Terms this small relative to the running integral end the outward march.
const NEGLIGIBLE: f64 = 1e-22;
/// Coarse levels can agree by accident on peaked integrands.
const MIN_LEVEL: usize = 3;

/// ∫₀^∞ f(t) dt.
///
/// `f` may have an integrable singularity at 0. Refinement stops once two
/// successive levels agree to `profile.rel_tol` (or `abs_tol`).
pub fn quad_halfline<F>(f: F, profile: &PrecisionProfile) -> Result<EvalResult>
where
    F: Fn(f64) -> f64,
{
    quad_halfline_propagating(|t| (f(t), 0.0), profile)
}

/// ∫₀^∞ f(t) dt for an integrand that is itself only known approximately.
///
/// `f` returns the value at t and a bound on its absolute error. The bounds
/// are integrated with the same rule and added to the reported error.
pub fn quad_halfline_propagating<F>(f: F, profile: &PrecisionProfile) -> Result<EvalResult>
where
    F: Fn(f64) -> (f64, f64),
{
    let node = |tau: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * tau.sinh();
        let t = u.exp();
        let weight = FRAC_PI_2 * tau.cosh() * t;
        let (y, e) = f(t);
        if !y.is_finite() {
            return Err(Error::domain(format!(
                "integrand is not finite at interior node t = {t:e}"
            )));
        }
        Ok((weight * y, weight * e))
    };
    de_integrate(node, TAU_MAX_HALFLINE, profile)
}

/// ∫₀¹ f(t, 1 - t) dt.
///
/// The closure receives both the node and its distance to the right
/// endpoint, each computed without cancellation, so factors like
/// `(1 - t)^(β - 1)` keep full relative accuracy near t = 1.
pub fn quad_unit<F>(f: F, profile: &PrecisionProfile) -> Result<EvalResult>
where
    F: Fn(f64, f64) -> f64,
{
    let node = |tau: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * tau.sinh();
        let t = 1.0 / (1.0 + (-2.0 * u).exp());
        let t_comp = 1.0 / (1.0 + (2.0 * u).exp());
        let c = u.cosh();
        let weight = 0.5 * FRAC_PI_2 * tau.cosh() / (c * c);
        if weight == 0.0 || t == 0.0 || t_comp == 0.0 {
            return Ok((0.0, 0.0));
        }
        let y = f(t, t_comp);
        if !y.is_finite() {
            return Err(Error::domain(format!(
                "integrand is not finite at interior node t = {t:e}"
            )));
        }
        Ok((weight * y, 0.0))
    };
    de_integrate(node, TAU_MAX_UNIT, profile)
}

struct LevelSum {
    sum: f64,
    abs_sum: f64,
    err_sum: f64,
    nodes: usize,
}

fn de_integrate<N>(node: N, tau_max: f64, profile: &PrecisionProfile) -> Result<EvalResult>
where
    N: Fn(f64) -> Result<(f64, f64)>,
{
    let mut h = 1.0;
    let level0 = march(&node, h, 0, 1, tau_max, 0.0)?;
    let mut estimate = h * level0.sum;
    let mut abs_total = h * level0.abs_sum;
    let mut err_total = h * level0.err_sum;
    let mut nodes = level0.nodes;
    let mut last_diff = f64::INFINITY;

    for level in 1..=profile.max_quad_refinements {
        h *= 0.5;
        let fresh = march(&node, h, 1, 2, tau_max, estimate.abs())?;
        let refined = 0.5 * estimate + h * fresh.sum;
        abs_total = 0.5 * abs_total + h * fresh.abs_sum;
        err_total = 0.5 * err_total + h * fresh.err_sum;
        nodes += fresh.nodes;
        let diff = (refined - estimate).abs();
        estimate = refined;
        last_diff = diff;
        if level >= MIN_LEVEL && diff <= profile.tolerance_for(estimate) {
            let err = diff + 8.0 * f64::EPSILON * abs_total + err_total;
            return Ok(EvalResult::new(estimate, err, Method::Integral, nodes));
        }
    }
    Err(Error::NonConvergent {
        what: "double-exponential quadrature",
        iterations: profile.max_quad_refinements,
        err_estimate: last_diff,
    })
}

/// Sums the nodes `tau = h·(first + stride·m)` for m = 0, 1, … and their
/// mirror images, marching outward until the terms become negligible.
fn march<N>(
    node: &N,
    h: f64,
    first: i64,
    stride: i64,
    tau_max: f64,
    reference: f64,
) -> Result<LevelSum>
where
    N: Fn(f64) -> Result<(f64, f64)>,
{
    let mut acc = CompensatedSum::new();
    let mut abs_sum = 0.0;
    let mut err_sum = 0.0;
    let mut nodes = 0usize;

    if first == 0 {
        let (y, e) = node(0.0)?;
        acc.add(y);
        abs_sum += y.abs();
        err_sum += e;
        nodes += 1;
    }

    for direction in [1.0, -1.0] {
        let mut quiet = 0;
        let mut m = if first == 0 { 1 } else { first };
        loop {
            let tau = direction * h * m as f64;
            if tau.abs() > tau_max {
                break;
            }
            let (y, e) = node(tau)?;
            nodes += 1;
            acc.add(y);
            abs_sum += y.abs();
            err_sum += e;
            let scale = reference.max(acc.value().abs());
            if y.abs() <= NEGLIGIBLE * scale && scale > 0.0 {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            m += stride.max(1);
        }
    }

    Ok(LevelSum {
        sum: acc.value(),
        abs_sum,
        err_sum,
        nodes,
    })
}
