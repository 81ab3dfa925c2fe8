//! Rate functions, Malthusian parameters and power-law exponents.
//!
//! Positions are `x = -ln(a) / t`, `y = -ln(b) / t` for a fragment with
//! sides `(a, b)` at time `t`. A rate function `r(x, y)` says that roughly
//! `exp(t r(x, y))` fragments sit near `(x, y)`.

mod beta;
pub mod curves;
mod exponents;
mod extended;
mod independent;
mod largest;
pub mod legendre;
pub mod roots;
pub mod special;

pub use beta::{gamma_beta, gamma_beta_asymptotic, gamma_beta_limit, rate_beta2, rate_beta_limit};
pub use exponents::{
    cumulative_exponent_3d, density_exponent, malthusian_interface, nerman_constants,
    triangle_malthusian, NermanConstants,
};
pub use extended::{on_support, ExtendedReal, SUPPORT_TOLERANCE};
pub use independent::{
    gamma_star_indep, rate_constant, rate_discrete, rate_geometric, rate_independent_general,
    rate_independent_numeric, Exponential, Fixed, Geometric, LifetimeTransform,
};
pub use largest::{alpha_largest, gamma_star_largest, rate_largest_first, rate_largest_first_numeric};
