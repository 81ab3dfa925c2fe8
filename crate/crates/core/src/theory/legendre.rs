//! Brute-force Legendre transforms by nested golden-section search.
//!
//! These are slow reference evaluations used to check the closed forms. The
//! objective `theta . a + alpha(theta)` is convex in `theta`, so the
//! minimum over a box can be taken one coordinate at a time.

use alloc::vec::Vec;

use super::roots::golden_min;

/// `inf` over `theta` in the box `bounds` of `theta . a + alpha(theta)`.
///
/// A coordinate whose bounds coincide is held fixed.
pub fn legendre_min(alpha: &dyn Fn(&[f64]) -> f64, a: &[f64], bounds: &[(f64, f64)], xtol: f64) -> f64 {
    assert_eq!(a.len(), bounds.len());
    let mut theta: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    nested(alpha, a, bounds, xtol, 0, &mut theta)
}

fn nested(
    alpha: &dyn Fn(&[f64]) -> f64,
    a: &[f64],
    bounds: &[(f64, f64)],
    xtol: f64,
    k: usize,
    theta: &mut Vec<f64>,
) -> f64 {
    if k == a.len() {
        let dot: f64 = theta.iter().zip(a).map(|(t, x)| t * x).sum();
        return dot + alpha(theta);
    }
    let (lo, hi) = bounds[k];
    if lo == hi {
        theta[k] = lo;
        return nested(alpha, a, bounds, xtol, k + 1, theta);
    }
    let mut objective = |t: f64| {
        theta[k] = t;
        nested(alpha, a, bounds, xtol, k + 1, theta)
    };
    golden_min(&mut objective, lo, hi, xtol).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_conjugate() {
        // alpha(t) = t^2 / 2 has conjugate -a^2 / 2 under this sign convention
        let alpha = |t: &[f64]| 0.5 * (t[0] * t[0] + t[1] * t[1]);
        let v = legendre_min(&alpha, &[0.3, -0.4], &[(-5.0, 5.0), (-5.0, 5.0)], 1e-10);
        assert!((v + 0.5 * (0.09 + 0.16)).abs() < 1e-12);
    }

    #[test]
    fn fixed_coordinate() {
        let alpha = |t: &[f64]| 0.5 * t[0] * t[0] + t[1];
        let v = legendre_min(&alpha, &[0.3, 2.0], &[(-5.0, 5.0), (1.0, 1.0)], 1e-10);
        assert!((v - (-0.045 + 3.0)).abs() < 1e-12);
    }
}
