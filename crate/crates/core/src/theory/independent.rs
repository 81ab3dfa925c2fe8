//! Rate functions when fragments split independently after random lifetimes.
//!
//! With lifetime transform `xi(phi) = E exp(-phi T)` and shrink weights `w`,
//! `alpha(theta)` solves `xi(alpha) * sum_i 2 w_i / (1 + theta_i) = 1`. Its
//! Legendre transform at `a` is
//!
//! ```text
//! A^2 xi(phi) - sum_i a_i + phi,   phi = zeta(1 / A^2),   A = sum_i sqrt(2 w_i a_i)
//! ```
//!
//! where `zeta` inverts `-xi'`.

use alloc::vec;

use super::legendre::legendre_min;
use super::roots::{brent, expand_bracket};
use crate::error::{config, domain, numeric, Result};
use crate::math::{exp, ln, ln_1p, sqrt};

/// Laplace transform of a splitting-time law.
pub trait LifetimeTransform {
    /// `E exp(-phi T)`.
    fn xi_hat(&self, phi: f64) -> f64;

    /// `-d/dphi E exp(-phi T)`.
    fn neg_xi_hat_prime(&self, phi: f64) -> f64;

    /// Left end of the half-line where the transform is finite.
    fn phi_floor(&self) -> f64;

    fn validate(&self) -> Result<()> {
        Ok(())
    }

    /// Inverse of `-xi'`: the `phi` with `-xi'(phi) = y`.
    fn zeta(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(domain!("zeta needs a positive argument, got {y}"));
        }
        let ly = ln(y);
        solve_decreasing(|phi| ln(self.neg_xi_hat_prime(phi)) - ly, self.phi_floor())
    }

    /// The `phi` with `xi(phi) = 1 / s`.
    fn growth_rate(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain!("offspring mean must be positive, got {s}"));
        }
        let ls = ln(s);
        solve_decreasing(|phi| ln(self.xi_hat(phi)) + ls, self.phi_floor())
    }
}

fn solve_decreasing(f: impl Fn(f64) -> f64, floor: f64) -> Result<f64> {
    let (lo, hi) = if floor.is_finite() {
        (floor + 1.0, floor + 2.0)
    } else {
        (-1.0, 1.0)
    };
    let (lo, hi) = expand_bracket(&f, lo, hi, floor)?;
    brent(&f, lo, hi, 1e-15)
}

/// Exponential lifetimes with the given rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl LifetimeTransform for Exponential {
    fn xi_hat(&self, phi: f64) -> f64 {
        self.rate / (self.rate + phi)
    }
    fn neg_xi_hat_prime(&self, phi: f64) -> f64 {
        let d = self.rate + phi;
        self.rate / (d * d)
    }
    fn phi_floor(&self) -> f64 {
        -self.rate
    }
    fn validate(&self) -> Result<()> {
        if self.rate > 0.0 && self.rate.is_finite() {
            Ok(())
        } else {
            Err(config!("rate must be positive, got {}", self.rate))
        }
    }
    fn zeta(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain!("zeta needs a positive argument, got {y}"));
        }
        Ok(sqrt(self.rate / y) - self.rate)
    }
    fn growth_rate(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain!("offspring mean must be positive, got {s}"));
        }
        Ok(self.rate * (s - 1.0))
    }
}

/// Deterministic lifetime `tau`; `tau = 1` gives discrete generations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fixed {
    pub tau: f64,
}

impl LifetimeTransform for Fixed {
    fn xi_hat(&self, phi: f64) -> f64 {
        exp(-phi * self.tau)
    }
    fn neg_xi_hat_prime(&self, phi: f64) -> f64 {
        self.tau * exp(-phi * self.tau)
    }
    fn phi_floor(&self) -> f64 {
        f64::NEG_INFINITY
    }
    fn validate(&self) -> Result<()> {
        if self.tau > 0.0 && self.tau.is_finite() {
            Ok(())
        } else {
            Err(config!("lifetime must be positive, got {}", self.tau))
        }
    }
    fn zeta(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(domain!("zeta needs a positive argument, got {y}"));
        }
        Ok(-ln(y / self.tau) / self.tau)
    }
    fn growth_rate(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain!("offspring mean must be positive, got {s}"));
        }
        Ok(ln(s) / self.tau)
    }
}

/// Lifetime `dt * K` with `K` geometric on `{1, 2, ...}` of parameter `dt`.
/// `zeta` is found numerically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geometric {
    pub dt: f64,
}

impl LifetimeTransform for Geometric {
    fn xi_hat(&self, phi: f64) -> f64 {
        let q = exp(-phi * self.dt);
        self.dt * q / (1.0 - (1.0 - self.dt) * q)
    }
    fn neg_xi_hat_prime(&self, phi: f64) -> f64 {
        let q = exp(-phi * self.dt);
        let d = 1.0 - (1.0 - self.dt) * q;
        self.dt * self.dt * q / (d * d)
    }
    fn phi_floor(&self) -> f64 {
        if self.dt < 1.0 {
            ln(1.0 - self.dt) / self.dt
        } else {
            f64::NEG_INFINITY
        }
    }
    fn validate(&self) -> Result<()> {
        if self.dt > 0.0 && self.dt <= 1.0 {
            Ok(())
        } else {
            Err(config!("dt must lie in (0, 1], got {}", self.dt))
        }
    }
}

/// Constant-rate rate function `1 - (1 - sqrt a1)^2 - (1 - sqrt a2)^2`.
pub fn rate_constant(a1: f64, a2: f64) -> Result<f64> {
    if !(a1 >= 0.0 && a2 >= 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(domain!("components must be nonnegative, got ({a1}, {a2})"));
    }
    let (u, v) = (1.0 - sqrt(a1), 1.0 - sqrt(a2));
    Ok(1.0 - u * u - v * v)
}

/// Constant-rate rate of fragments with sides `(a, b)` at unit time.
pub fn gamma_star_indep(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0) {
        return Err(domain!("sides must lie in (0, 1], got ({a}, {b})"));
    }
    rate_constant(-ln(a), -ln(b))
}

/// Discrete-generation rate function `1 - x - y + 2 ln(sqrt x + sqrt y)`.
pub fn rate_discrete(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(domain!("coordinates must be positive, got ({x}, {y})"));
    }
    Ok(1.0 - x - y + 2.0 * ln(sqrt(x) + sqrt(y)))
}

/// Rate function for geometric lifetimes with step `dt` in `(0, 1)`.
///
/// Evaluated in rationalized form, free of the `1 - dt` cancellation.
pub fn rate_geometric(a1: f64, a2: f64, dt: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0) {
        return Err(domain!("components must be positive, got ({a1}, {a2})"));
    }
    if !(dt > 0.0 && dt < 1.0) {
        return Err(domain!("dt must lie in (0, 1), got {dt}"));
    }
    let a = sqrt(a1) + sqrt(a2);
    let d = sqrt(a * a * dt * dt + 4.0 * (1.0 - dt)) + a * dt;
    Ok(2.0 * a / d + ln_1p(dt * (0.5 * a * d - 1.0)) / dt - a1 - a2)
}

fn check_weights(components: &[f64], weights: &[f64]) -> Result<()> {
    if components.len() != weights.len() || components.is_empty() {
        return Err(domain!("components and weights must have the same nonzero length"));
    }
    if components.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(domain!("components must be positive"));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(domain!("weights must be a probability vector"));
    }
    Ok(())
}

/// The general closed form for any dimension, shrink weights and lifetime.
pub fn rate_independent_general(components: &[f64], weights: &[f64], lt: &dyn LifetimeTransform) -> Result<f64> {
    check_weights(components, weights)?;
    lt.validate()?;
    let big_a: f64 = components
        .iter()
        .zip(weights)
        .map(|(a, w)| sqrt(2.0 * w * a))
        .sum();
    let y = 1.0 / (big_a * big_a);
    let phi = lt.zeta(y)?;
    let round_trip = lt.neg_xi_hat_prime(phi) / y - 1.0;
    if !(round_trip.abs() <= 1e-8) {
        return Err(numeric!(
            "zeta round trip failed at y = {y}: relative error {round_trip}"
        ));
    }
    Ok(big_a * big_a * lt.xi_hat(phi) - components.iter().sum::<f64>() + phi)
}

/// Brute-force reference for [`rate_independent_general`]: numeric
/// `alpha(theta)` minimized over `theta_i` in `(-1, 40]`.
pub fn rate_independent_numeric(components: &[f64], weights: &[f64], lt: &dyn LifetimeTransform) -> Result<f64> {
    check_weights(components, weights)?;
    lt.validate()?;
    let alpha = |theta: &[f64]| -> f64 {
        let s: f64 = weights
            .iter()
            .zip(theta)
            .map(|(w, t)| 2.0 * w / (1.0 + t))
            .sum();
        lt.growth_rate(s).unwrap_or(f64::INFINITY)
    };
    let bounds = vec![(-1.0 + 1e-9, 40.0); components.len()];
    Ok(legendre_min(&alpha, components, &bounds, 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_examples() {
        assert_eq!(rate_constant(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(rate_constant(0.0, 0.0).unwrap(), -1.0);
        let e = libm::exp(-1.0);
        assert!((gamma_star_indep(e, e).unwrap() - 1.0).abs() < 1e-15);
        assert!(rate_constant(-1.0, 0.0).is_err());
    }

    #[test]
    fn discrete_examples() {
        assert!((rate_discrete(0.5, 0.5).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((rate_discrete(1.0, 1.0).unwrap() - (2.0 * core::f64::consts::LN_2 - 1.0)).abs() < 1e-15);
        assert!(rate_discrete(0.0, 1.0).is_err());
    }

    #[test]
    fn geometric_domain() {
        assert!(rate_geometric(1.0, 1.0, 0.0).is_err());
        assert!(rate_geometric(1.0, 1.0, 1.0).is_err());
        assert!(rate_geometric(1.0, 1.0, 0.5).unwrap().is_finite());
    }

    #[test]
    fn zeta_round_trips() {
        let lts: [&dyn LifetimeTransform; 5] = [
            &Exponential { rate: 1.0 },
            &Exponential { rate: 2.5 },
            &Fixed { tau: 1.0 },
            &Geometric { dt: 0.3 },
            &Geometric { dt: 1.0 },
        ];
        for lt in lts {
            assert!((lt.xi_hat(0.0) - 1.0).abs() < 1e-15);
            for i in 0..20 {
                let x = -0.3 + 0.25 * i as f64;
                let y = lt.neg_xi_hat_prime(x);
                assert!((lt.zeta(y).unwrap() - x).abs() < 1e-8, "x = {x}");
                let s = 1.0 / lt.xi_hat(x);
                assert!((lt.growth_rate(s).unwrap() - x).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn numeric_zeta_for_geometric_matches_closed_form_limit() {
        // dt = 1 is the fixed lifetime
        let g = Geometric { dt: 1.0 };
        let f = Fixed { tau: 1.0 };
        for y in [0.1, 0.5, 2.0] {
            assert!((g.zeta(y).unwrap() - f.zeta(y).unwrap()).abs() < 1e-12);
        }
    }
}
