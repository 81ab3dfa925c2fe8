//! Named theory functions evaluated on grids, for curve dumps.

use alloc::vec::Vec;

use super::beta::{gamma_beta, gamma_beta_asymptotic, gamma_beta_limit, rate_beta2, rate_beta_limit};
use super::exponents::{density_exponent, malthusian_interface};
use super::extended::ExtendedReal;
use super::independent::{gamma_star_indep, rate_constant, rate_discrete, rate_geometric};
use super::largest::{gamma_star_largest, rate_largest_first};
use crate::error::{config, Error, Result};
use crate::math::floor;

/// Registered names with their grid variables and parameters.
pub const CURVES: &[(&str, &[&str], &[&str])] = &[
    ("f_p", &["x"], &["p"]),
    ("gamma_star_largest", &["a", "b"], &["p"]),
    ("rate_constant", &["a1", "a2"], &[]),
    ("gamma_star_indep", &["a", "b"], &[]),
    ("g", &["x", "y"], &[]),
    ("rate_geometric", &["a1", "a2"], &["dt"]),
    ("rate_beta_limit", &["x"], &[]),
    ("rate_beta2", &["x"], &[]),
    ("gamma_beta", &["beta"], &["p"]),
    ("gamma_beta_asymptotic", &["beta"], &["p"]),
    ("gamma_beta_limit", &["p"], &[]),
    ("malthusian_interface", &["p"], &[]),
    ("density_exponent", &["p"], &[]),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    RateLargestFirst { p: f64 },
    GammaStarLargest { p: f64 },
    RateConstant,
    GammaStarIndep,
    RateDiscrete,
    RateGeometric { dt: f64 },
    RateBetaLimit,
    RateBeta2,
    GammaBeta { p: f64 },
    GammaBetaAsymptotic { p: f64 },
    GammaBetaLimit,
    MalthusianInterface,
    DensityExponent,
}

impl Curve {
    /// Look a curve up by name; `param` supplies its parameters.
    /// `rate_largest_first` and `rate_discrete` are accepted as aliases.
    pub fn from_name(name: &str, param: impl Fn(&str) -> Option<f64>) -> Result<Self> {
        let need = |key: &str| param(key).ok_or_else(|| config!("function {name} needs parameter {key}"));
        Ok(match name {
            "f_p" | "rate_largest_first" => Curve::RateLargestFirst { p: need("p")? },
            "gamma_star_largest" => Curve::GammaStarLargest { p: need("p")? },
            "rate_constant" => Curve::RateConstant,
            "gamma_star_indep" => Curve::GammaStarIndep,
            "g" | "rate_discrete" => Curve::RateDiscrete,
            "rate_geometric" => Curve::RateGeometric { dt: need("dt")? },
            "rate_beta_limit" => Curve::RateBetaLimit,
            "rate_beta2" => Curve::RateBeta2,
            "gamma_beta" => Curve::GammaBeta { p: need("p")? },
            "gamma_beta_asymptotic" => Curve::GammaBetaAsymptotic { p: need("p")? },
            "gamma_beta_limit" => Curve::GammaBetaLimit,
            "malthusian_interface" => Curve::MalthusianInterface,
            "density_exponent" => Curve::DensityExponent,
            _ => return Err(config!("unknown function {name}")),
        })
    }

    pub fn variables(&self) -> &'static [&'static str] {
        match self {
            Curve::RateLargestFirst { .. } | Curve::RateBetaLimit | Curve::RateBeta2 => &["x"],
            Curve::GammaStarLargest { .. } | Curve::GammaStarIndep => &["a", "b"],
            Curve::RateConstant | Curve::RateGeometric { .. } => &["a1", "a2"],
            Curve::RateDiscrete => &["x", "y"],
            Curve::GammaBeta { .. } | Curve::GammaBetaAsymptotic { .. } => &["beta"],
            Curve::GammaBetaLimit | Curve::MalthusianInterface | Curve::DensityExponent => &["p"],
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<ExtendedReal> {
        let n = self.variables().len();
        if point.len() != n {
            return Err(config!("expected {n} coordinates, got {}", point.len()));
        }
        let f = ExtendedReal::Finite;
        Ok(match *self {
            Curve::RateLargestFirst { p } => f(rate_largest_first(p, point[0])?),
            Curve::GammaStarLargest { p } => gamma_star_largest(p, point[0], point[1])?,
            Curve::RateConstant => f(rate_constant(point[0], point[1])?),
            Curve::GammaStarIndep => f(gamma_star_indep(point[0], point[1])?),
            Curve::RateDiscrete => f(rate_discrete(point[0], point[1])?),
            Curve::RateGeometric { dt } => f(rate_geometric(point[0], point[1], dt)?),
            Curve::RateBetaLimit => rate_beta_limit(point[0]),
            Curve::RateBeta2 => f(rate_beta2(point[0])?),
            Curve::GammaBeta { p } => f(gamma_beta(p, point[0])?),
            Curve::GammaBetaAsymptotic { p } => f(gamma_beta_asymptotic(p, point[0])?),
            Curve::GammaBetaLimit => f(gamma_beta_limit(point[0])?),
            Curve::MalthusianInterface => f(malthusian_interface(point[0])?),
            Curve::DensityExponent => f(density_exponent(point[0])?),
        })
    }
}

/// Grid points `start + i * step` for `i = 0, 1, ...` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && start.is_finite() && stop >= start) {
            return Err(config!("bad grid {start}:{stop}:{step}"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = floor((self.stop - self.start) / self.step + 1e-9) as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// One tabulated point; `value` is `None` where the function is undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub coords: Vec<f64>,
    pub value: Option<ExtendedReal>,
}

/// Evaluate `curve` on the product grid of `axes` (first axis slowest).
/// Points outside the function's domain are kept with no value; other
/// failures abort.
pub fn tabulate(curve: &Curve, axes: &[Axis]) -> Result<Vec<CurvePoint>> {
    let n = curve.variables().len();
    if axes.len() != n {
        return Err(config!("function takes {n} grid axes, got {}", axes.len()));
    }
    let grids: Vec<Vec<f64>> = axes.iter().map(Axis::points).collect();
    let total: usize = grids.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = alloc::vec![0usize; n];
    for _ in 0..total {
        let coords: Vec<f64> = idx.iter().zip(&grids).map(|(&i, g)| g[i]).collect();
        let value = match curve.eval(&coords) {
            Ok(v) => Some(v),
            Err(Error::Domain(_)) => None,
            Err(e) => return Err(e),
        };
        out.push(CurvePoint { coords, value });
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < grids[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(out)
}
