//! Scalar root finding and one-dimensional minimization.

use crate::error::{numeric, Result};

const MAX_ITER: usize = 200;

/// Brent's method on a bracket with a sign change.
pub fn brent(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(numeric!(
            "no sign change on [{lo}, {hi}]: f(lo) = {fa}, f(hi) = {fb}"
        ));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(numeric!("function not finite at {b}"));
        }
    }
    Err(numeric!(
        "Brent iteration did not converge on [{lo}, {hi}]"
    ))
}

/// Plain bisection; robust when `f` is only monotone up to rounding.
pub fn bisect(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(numeric!(
            "no sign change on [{lo}, {hi}]: f(lo) = {fa}, f(hi) = {fb}"
        ));
    }
    let neg_at_a = fa < 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= xtol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == neg_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Widen `[lo, hi]` geometrically around its centre until `f` changes sign.
///
/// Endpoints are clamped to `[floor, +inf)`; `floor` itself is never
/// evaluated, only approached.
pub fn expand_bracket(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    floor: f64,
) -> Result<(f64, f64)> {
    let (mut a, mut b) = (lo.max(floor), hi);
    if a <= floor {
        a = floor + 0.5 * (b - floor);
    }
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..MAX_ITER {
        if fa.signum() != fb.signum() {
            return Ok((a, b));
        }
        if fa.abs() < fb.abs() {
            let next = a - (b - a);
            a = if next <= floor { floor + 0.5 * (a - floor) } else { next };
            fa = f(a);
        } else {
            b += b - a;
            fb = f(b);
        }
    }
    Err(numeric!(
        "could not bracket a root starting from [{lo}, {hi}]; last [{a}, {b}] with values [{fa}, {fb}]"
    ))
}

/// Golden-section search for the minimum of a unimodal function.
/// Returns `(argmin, min)`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> (f64, f64) {
    let r = 0.5 * (libm::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > xtol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cube_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - libm::cbrt(2.0)).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_same_sign() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn bisect_matches_brent() {
        let f = |x: f64| libm::cos(x) - x;
        let a = bisect(f, 0.0, 1.0, 1e-15).unwrap();
        let b = brent(f, 0.0, 1.0, 1e-15).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn bracket_expands_towards_root() {
        let (a, b) = expand_bracket(|x| x - 100.0, 1.0, 2.0, 0.0).unwrap();
        assert!(a <= 100.0 && b >= 100.0);
        let (a, b) = expand_bracket(|x| x - 1e-6, 1.0, 2.0, 0.0).unwrap();
        assert!(a > 0.0 && a <= 1e-6 && b >= 1e-6);
    }

    #[test]
    fn golden_parabola() {
        let (x, v) = golden_min(|x| (x - 0.3) * (x - 0.3) + 2.0, -5.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }
}
