//! Malthusian parameters and power-law exponents of interface counts.
//!
//! Horizontal interfaces of equal length form the excursions of a biased
//! walk that steps up with probability `p`; their number is the hitting time
//! `T0` of zero from one, with mean `1 / (1 - 2p)`. That mean is the
//! Malthusian parameter of the interface process, and the number of
//! horizontal interfaces longer than `x` grows like `x^(-1/(1-2p))`.

use crate::error::{domain, Result};

fn check(p: f64) -> Result<()> {
    if (0.0..0.5).contains(&p) {
        Ok(())
    } else {
        Err(domain!(
            "p must lie in [0, 1/2): for p >= 1/2 the horizontal interface count is infinite \
             with positive probability (got {p})"
        ))
    }
}

/// `1 / (1 - 2p)`, also the cumulative tail exponent of interface lengths.
pub fn malthusian_interface(p: f64) -> Result<f64> {
    check(p)?;
    Ok(1.0 / (1.0 - 2.0 * p))
}

/// Density exponent of interface lengths, `-1 - 1/(1 - 2p)`.
pub fn density_exponent(p: f64) -> Result<f64> {
    Ok(-1.0 - malthusian_interface(p)?)
}

/// Constants of the ratio limit theorem for interface counts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NermanConstants {
    pub alpha: f64,
    pub mu1: f64,
    pub z_inf: f64,
}

pub fn nerman_constants(p: f64) -> Result<NermanConstants> {
    let alpha = malthusian_interface(p)?;
    Ok(NermanConstants {
        alpha,
        mu1: 1.0 / (alpha + 1.0),
        z_inf: 1.0 - 1.0 / alpha,
    })
}

/// Cumulative exponent of horizontal plate areas in the unbiased cube.
///
/// A horizontal plate keeps its area when the cuboid is cut horizontally
/// (probability 1/3) and loses it otherwise, which is the planar problem
/// at `p = 1/3`.
pub fn cumulative_exponent_3d() -> f64 {
    1.0 / (1.0 - 2.0 / 3.0)
}

/// Malthusian parameter of the triangle model: the root of
/// `3 E U^g + E (1 - U)^g = 4 / (g + 1) = 1`.
pub fn triangle_malthusian() -> f64 {
    4.0 - 1.0
}
