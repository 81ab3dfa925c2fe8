//! Special functions.

/// Natural log of the Gamma function for `x > 0`.
///
/// Backed by `libm::lgamma` (the fdlibm algorithm), which is accurate to a
/// few ulps on the positive axis.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Gamma function.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}
