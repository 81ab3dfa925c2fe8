//! Exponents and rate functions under symmetric Beta(beta, beta) nucleation.

use super::extended::ExtendedReal;
use super::roots::{bisect, brent, expand_bracket};
use super::special::ln_gamma;
use crate::error::{domain, Result};
use crate::math::{exp, ln, sqrt};

fn check(p: f64, beta: f64) -> Result<()> {
    if !(0.0..0.5).contains(&p) {
        return Err(domain!(
            "p must lie in [0, 1/2); for p >= 1/2 the horizontal interface count diverges (got {p})"
        ));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain!("Beta shape must be positive, got {beta}"));
    }
    Ok(())
}

/// Tail exponent `gamma`: the positive root of
/// `(2 - 2p)/(1 - 2p) * G(g + b) G(2b) / (G(g + 2b) G(b)) = 1`.
pub fn gamma_beta(p: f64, beta: f64) -> Result<f64> {
    check(p, beta)?;
    let c = ln((2.0 - 2.0 * p) / (1.0 - 2.0 * p)) + ln_gamma(2.0 * beta) - ln_gamma(beta);
    let h = |g: f64| c + ln_gamma(g + beta) - ln_gamma(g + 2.0 * beta);
    let start = gamma_beta_asymptotic(p, beta)?;
    let (lo, hi) = expand_bracket(h, 0.25 * start, 4.0 * start, 0.0)?;
    brent(h, lo, hi, 1e-13)
}

/// The `beta -> infinity` limit `ln((2 - 2p)/(1 - 2p)) / ln 2`.
pub fn gamma_beta_limit(p: f64) -> Result<f64> {
    check(p, 1.0)?;
    Ok(ln((2.0 - 2.0 * p) / (1.0 - 2.0 * p)) / core::f64::consts::LN_2)
}

/// Asymptotic form `(C / (1 - 2p))^(1/beta)` with `C = G(2 beta)/G(beta)`,
/// accurate as `p -> 1/2`.
pub fn gamma_beta_asymptotic(p: f64, beta: f64) -> Result<f64> {
    check(p, beta)?;
    Ok(exp((ln_gamma(2.0 * beta) - ln_gamma(beta) - ln(1.0 - 2.0 * p)) / beta))
}

/// Limit rate function for deterministic half splits,
/// `(x ln x + (1 - x) ln(1 - x)) / ln(1/2)` on `[0, 1]`.
pub fn rate_beta_limit(x: f64) -> ExtendedReal {
    if !(0.0..=1.0).contains(&x) {
        return ExtendedReal::NegInfinity;
    }
    let xlx = |v: f64| if v > 0.0 { v * ln(v) } else { 0.0 };
    ExtendedReal::Finite((xlx(x) + xlx(1.0 - x)) / -core::f64::consts::LN_2)
}

/// Rate function for Beta(2, 2) nucleation,
/// `-5/2 + inf_psi (s psi / 2 + sqrt(psi^2 + 2 sqrt(25 psi^2 + 144) + 25) / 2)`
/// with `s = 2x - 1`.
pub fn rate_beta2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain!("x must lie in [0, 1], got {x}"));
    }
    let s = 2.0 * x - 1.0;
    if s.abs() >= 1.0 {
        // the infimum is the psi -> -s * inf limit
        return Ok(0.0);
    }
    let objective = |psi: f64| {
        0.5 * s * psi + 0.5 * sqrt(psi * psi + 2.0 * sqrt(25.0 * psi * psi + 144.0) + 25.0)
    };
    let slope = |psi: f64| {
        let r = sqrt(25.0 * psi * psi + 144.0);
        let inner = psi * psi + 2.0 * r + 25.0;
        0.5 * s + 0.5 * (psi + 25.0 * psi / r) / sqrt(inner)
    };
    let mut span = 1.0;
    while slope(-span) >= 0.0 || slope(span) <= 0.0 {
        span *= 2.0;
        if span > 1e12 {
            return Err(domain!("could not bracket the minimizer for x = {x}"));
        }
    }
    let psi = bisect(slope, -span, span, 1e-13)?;
    Ok(-2.5 + objective(psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_case_is_exact() {
        for p in [0.0, 0.1, 0.3, 0.45, 0.49] {
            let g = gamma_beta(p, 1.0).unwrap();
            assert!((g - 1.0 / (1.0 - 2.0 * p)).abs() < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn beta_two_closed_form() {
        let expected = -2.5 + 0.5 * libm::sqrt(85.0);
        assert!((gamma_beta(0.3, 2.0).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn limit_value() {
        let v = gamma_beta_limit(0.3).unwrap();
        assert!((v - libm::log(3.5) / core::f64::consts::LN_2).abs() < 1e-15);
        assert!((gamma_beta(0.3, 400.0).unwrap() - v).abs() < 0.01);
    }

    #[test]
    fn domain() {
        assert!(gamma_beta(0.5, 1.0).is_err());
        assert!(gamma_beta(0.2, 0.0).is_err());
        assert!(gamma_beta_limit(0.6).is_err());
    }

    #[test]
    fn beta_limit_rate() {
        assert_eq!(rate_beta_limit(0.5), ExtendedReal::Finite(1.0));
        assert_eq!(rate_beta_limit(0.0), ExtendedReal::Finite(0.0));
        assert_eq!(rate_beta_limit(1.2), ExtendedReal::NegInfinity);
        assert_eq!(rate_beta_limit(0.2), rate_beta_limit(0.8));
    }

    #[test]
    fn beta2_rate() {
        assert!((rate_beta2(0.5).unwrap() - 1.0).abs() < 1e-12);
        assert!((rate_beta2(0.2).unwrap() - rate_beta2(0.8).unwrap()).abs() < 1e-10);
        assert_eq!(rate_beta2(1.0).unwrap(), 0.0);
        assert!(rate_beta2(0.01).unwrap() < rate_beta2(0.3).unwrap());
    }
}
