//! Rate functions of the largest-first parametrization.
//!
//! A fragment's position is `(-ln a, -ln b)` and its birth time is
//! `-ln(ab)`, so every split moves one coordinate and the clock by the same
//! amount. With `w_i` the probability that a split shrinks coordinate `i`
//! the offspring transform is
//!
//! ```text
//! m(theta, phi) = sum_i 2 w_i / (1 + theta_i + phi)
//! ```
//!
//! and `alpha(theta)` solves `m(theta, alpha) = 1`. The rate function is
//! the Legendre transform of `alpha`, finite only on `sum_i a_i = 1`.

use alloc::vec;

use super::extended::{on_support, ExtendedReal, SUPPORT_TOLERANCE};
use super::legendre::legendre_min;
use super::roots::brent;
use crate::error::{domain, Result};
use crate::math::{ln, sqrt};

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain!("horizontal probability must lie in (0, 1), got {p}"))
    }
}

/// `f_p(x, 1 - x)`: the 2D rate function on its support line.
///
/// Coordinate `x` belongs to the horizontal side; it shrinks on vertical
/// splits, which happen with probability `1 - p`. The maximum, 1, sits at
/// `x = 1 - p`.
pub fn rate_largest_first(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain!("x must lie in [0, 1], got {x}"));
    }
    let s = 2.0 * x - 1.0;
    Ok(4.0 * sqrt(p * (1.0 - p)) * sqrt(x * (1.0 - x)) + (1.0 - 2.0 * p) * s)
}

/// Rate of fragments with sides `(a, b)` at unit time: `f_p(-ln a, -ln b)`
/// on the curve `ab = e^-1`, `-inf` elsewhere.
pub fn gamma_star_largest(p: f64, a: f64, b: f64) -> Result<ExtendedReal> {
    check_p(p)?;
    if !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0) {
        return Err(domain!("sides must lie in (0, 1], got ({a}, {b})"));
    }
    let (x, y) = (-ln(a), -ln(b));
    if !on_support(x, y) {
        return Ok(ExtendedReal::NegInfinity);
    }
    rate_largest_first(p, x.clamp(0.0, 1.0)).map(ExtendedReal::Finite)
}

/// `alpha(theta)` for shrink weights `w`: the root in `phi` of
/// `sum_i 2 w_i / (1 + theta_i + phi) = 1`.
pub fn alpha_largest(weights: &[f64], theta: &[f64]) -> Result<f64> {
    if weights.len() != theta.len() || weights.is_empty() {
        return Err(domain!("weights and theta must have the same nonzero length"));
    }
    let (k, base) = weights
        .iter()
        .zip(theta)
        .enumerate()
        .filter(|(_, (w, _))| **w > 0.0)
        .map(|(i, (_, t))| (i, *t))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| domain!("all weights are zero"))?;
    // u = 1 + theta_min + phi > 0; the root lies in [w_k, 2]
    let g = |u: f64| -> f64 {
        weights
            .iter()
            .zip(theta)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, t)| 2.0 * w / (u + t - base))
            .sum::<f64>()
            - 1.0
    };
    let u = brent(g, weights[k], 2.0, 1e-15)?;
    Ok(u - 1.0 - base)
}

/// Numeric rate function for any dimension: the Legendre transform of
/// [`alpha_largest`] with the last coordinate of `theta` pinned to zero.
/// `-inf` off the plane `sum_i a_i = 1`.
pub fn rate_largest_first_numeric(weights: &[f64], a: &[f64]) -> Result<ExtendedReal> {
    if weights.len() != a.len() || a.len() < 2 {
        return Err(domain!("need matching weights and coordinates in 2 or more dimensions"));
    }
    if a.iter().any(|x| !(*x >= 0.0)) {
        return Err(domain!("coordinates must be nonnegative"));
    }
    if (a.iter().sum::<f64>() - 1.0).abs() > SUPPORT_TOLERANCE {
        return Ok(ExtendedReal::NegInfinity);
    }
    alpha_largest(weights, &vec![0.0; a.len()])?;
    let mut bounds = vec![(-60.0, 60.0); a.len()];
    *bounds.last_mut().expect("nonempty") = (0.0, 0.0);
    let alpha = |t: &[f64]| alpha_largest(weights, t).unwrap_or(f64::INFINITY);
    Ok(ExtendedReal::Finite(legendre_min(&alpha, a, &bounds, 1e-10)))
}
