//! Simulation oracle for the hitting time `T0`.

use crate::error::{domain, Result};
use crate::math::sqrt;
use crate::random::RandomSource;

/// Mean of `T0` over `n_walks` walks with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

/// Simulate walks from 1 that step up with probability `p` until they hit 0.
pub fn t0_mean_estimate(p: f64, n_walks: u64, seed: u64) -> Result<MeanEstimate> {
    if !(0.0..0.5).contains(&p) {
        return Err(domain!(
            "p must lie in [0, 1/2); for p >= 1/2 the hitting time has infinite mean (got {p})"
        ));
    }
    if n_walks == 0 {
        return Err(domain!("need at least one walk"));
    }
    let mut src = RandomSource::from_seed(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n_walks {
        let mut height = 1u64;
        let mut steps = 0u64;
        while height > 0 {
            steps += 1;
            if p > 0.0 && src.bernoulli(p) {
                height += 1;
            } else {
                height -= 1;
            }
        }
        let s = steps as f64;
        sum += s;
        sum_sq += s * s;
    }
    let n = n_walks as f64;
    let mean = sum / n;
    let var = if n_walks > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(MeanEstimate {
        mean,
        stderr: sqrt(var / n),
        n: n_walks,
    })
}

/// Empirical mean of `T0`.
pub fn t0_mean_oracle(p: f64, n_walks: u64, seed: u64) -> Result<f64> {
    t0_mean_estimate(p, n_walks, seed).map(|e| e.mean)
}
