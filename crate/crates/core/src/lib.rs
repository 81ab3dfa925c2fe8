//! Stochastic fragmentation models of martensitic microstructure.
//!
//! A unit square (or cube, or right triangle) is split repeatedly by
//! axis-parallel interfaces. This crate holds everything that does not need
//! an operating system:
//!
//! * [`geometry`]: fragment types and the single-split rules,
//! * [`random`]: seeded streams plus the nucleation and direction laws,
//! * [`engine`]: event-driven runs under the supported time parametrizations,
//! * [`theory`]: rate functions, Malthusian parameters and power-law exponents,
//! * [`stats`]: log-coordinate histograms, tail functions and power-law fits.
//!
//! File formats, configuration and ensemble orchestration live in the
//! `frag-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod engine;
mod error;
pub mod geometry;
mod math;
pub mod random;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
