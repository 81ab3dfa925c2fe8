//! Seeded random streams and the two sampling laws of the model.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! which is portable: the same seed yields the same stream on every target.
//! Realization streams are derived from a master seed with [`mix_seed`].

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{config, Result};
use crate::geometry::Orientation;
use crate::math::ln;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index` under `master_seed`:
/// `splitmix64(master_seed ^ splitmix64(index))`.
pub fn mix_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index))
}

/// Deterministic pseudorandom stream. Single owner; clone to fork.
#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_realization(master_seed: u64, index: u64) -> Self {
        Self::from_seed(mix_seed(master_seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`; exact zeros are redrawn.
    pub fn open_unit(&mut self) -> f64 {
        loop {
            let u = self.unit();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Index drawn with probability proportional to `weights`.
    pub fn categorical(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let target = self.unit() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = i;
            if target < acc {
                return i;
            }
        }
        last
    }

    /// Exponential variate with the given rate.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -ln(self.open_unit()) / rate
    }

    fn beta(&mut self, dist: &Beta<f64>) -> f64 {
        dist.sample(&mut self.rng)
    }
}

/// Law of the split fraction `U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NucleationLaw {
    Uniform,
    /// Symmetric `Beta(shape, shape)`; `shape = 1` is the uniform law.
    Beta { shape: f64 },
}

impl NucleationLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NucleationLaw::Uniform => Ok(()),
            NucleationLaw::Beta { shape } if shape > 0.0 && shape.is_finite() => Ok(()),
            NucleationLaw::Beta { shape } => {
                Err(config!("beta shape must be positive and finite, got {shape}"))
            }
        }
    }

    /// Prepared sampler for repeated draws.
    pub fn sampler(&self) -> Result<SplitSampler> {
        self.validate()?;
        let beta = match *self {
            NucleationLaw::Uniform => None,
            NucleationLaw::Beta { shape } => Some(
                Beta::new(shape, shape)
                    .map_err(|e| config!("beta shape {shape} rejected: {e}"))?,
            ),
        };
        Ok(SplitSampler { beta })
    }
}

/// Validated form of a [`NucleationLaw`].
#[derive(Clone, Debug)]
pub struct SplitSampler {
    beta: Option<Beta<f64>>,
}

impl SplitSampler {
    /// Draw in the open interval `(0, 1)`; endpoint draws are redrawn.
    pub fn sample(&self, src: &mut RandomSource) -> f64 {
        match &self.beta {
            None => src.open_unit(),
            Some(dist) => loop {
                let u = src.beta(dist);
                if u > 0.0 && u < 1.0 {
                    return u;
                }
            },
        }
    }
}

/// One split fraction drawn from `law`.
pub fn sample_split_fraction(law: &NucleationLaw, src: &mut RandomSource) -> Result<f64> {
    Ok(law.sampler()?.sample(src))
}

/// Law of the interface direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DirectionLaw {
    /// Horizontal with probability `p`, vertical otherwise. For triangles
    /// `p` is the probability of cut `A`.
    Planar { p: f64 },
    /// Plate orthogonal to axis `k` with probability `weights[k]`.
    Spatial { weights: [f64; 3] },
}

impl DirectionLaw {
    pub fn unbiased_3d() -> Self {
        DirectionLaw::Spatial {
            weights: [1.0 / 3.0; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DirectionLaw::Planar { p } => {
                if (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(config!("direction probability p must lie in [0, 1], got {p}"))
                }
            }
            DirectionLaw::Spatial { weights } => {
                if weights.iter().any(|w| !(*w >= 0.0)) {
                    return Err(config!("axis weights must be nonnegative, got {weights:?}"));
                }
                let sum: f64 = weights.iter().sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(config!("axis weights must sum to 1, got {sum}"));
                }
                Ok(())
            }
        }
    }

    /// Probability that a split shrinks coordinate `k` (`a`, `b`, `c`).
    pub fn shrink_weights(&self) -> alloc::vec::Vec<f64> {
        match *self {
            DirectionLaw::Planar { p } => alloc::vec![1.0 - p, p],
            DirectionLaw::Spatial { weights } => weights.to_vec(),
        }
    }
}

/// One interface direction drawn from `law`.
pub fn sample_direction(law: &DirectionLaw, src: &mut RandomSource) -> Orientation {
    match law {
        DirectionLaw::Planar { p } => {
            if src.bernoulli(*p) {
                Orientation::Horizontal
            } else {
                Orientation::Vertical
            }
        }
        DirectionLaw::Spatial { weights } => match src.categorical(weights) {
            0 => Orientation::Axis1,
            1 => Orientation::Axis2,
            _ => Orientation::Axis3,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::special::ln_gamma;
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::from_seed(42);
        let mut b = RandomSource::from_seed(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(mix_seed(1, 0), mix_seed(1, 1));
        assert_ne!(mix_seed(1, 0), mix_seed(2, 0));
    }

    #[test]
    fn uniform_mean_is_half() {
        let mut src = RandomSource::from_seed(7);
        let law = NucleationLaw::Uniform;
        let s = law.sampler().unwrap();
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.sample(&mut src)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn beta_one_matches_uniform_in_law() {
        let n = 100_000;
        let mut src = RandomSource::from_seed(11);
        let beta = NucleationLaw::Beta { shape: 1.0 }.sampler().unwrap();
        let unif = NucleationLaw::Uniform.sampler().unwrap();
        let mut xs: Vec<f64> = (0..n).map(|_| beta.sample(&mut src)).collect();
        let mut ys: Vec<f64> = (0..n).map(|_| unif.sample(&mut src)).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        // two-sample KS statistic
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < n && j < n {
            if xs[i] <= ys[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / n as f64 - j as f64 / n as f64).abs());
        }
        // 1% critical value: 1.63 * sqrt(2/n)
        let crit = 1.63 * libm::sqrt(2.0 / n as f64);
        assert!(d < crit, "KS {d} >= {crit}");
    }

    /// E[U^g] for Beta(b, b) from the Gamma-function identity.
    fn beta_moment(b: f64, g: f64) -> f64 {
        libm::exp(ln_gamma(g + b) + ln_gamma(2.0 * b) - ln_gamma(g + 2.0 * b) - ln_gamma(b))
    }

    #[test]
    fn beta_two_moments() {
        let mut src = RandomSource::from_seed(3);
        let s = NucleationLaw::Beta { shape: 2.0 }.sampler().unwrap();
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| s.sample(&mut src)).collect();
        // 6/((g+3)(g+2)) at g = 1
        assert!((beta_moment(2.0, 1.0) - 0.5).abs() < 1e-12);
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002);
        for g in [0.5, 1.0, 2.0, 3.5] {
            let vals: Vec<f64> = draws.iter().map(|u| libm::pow(*u, g)).collect();
            let m = vals.iter().sum::<f64>() / n as f64;
            let var = vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64;
            let se = libm::sqrt(var / n as f64);
            let want = beta_moment(2.0, g);
            assert!((m - want).abs() < 3.0 * se, "g={g}: {m} vs {want} (se {se})");
        }
    }

    #[test]
    fn endpoints_never_returned() {
        let mut src = RandomSource::from_seed(5);
        let s = NucleationLaw::Beta { shape: 0.05 }.sampler().unwrap();
        for _ in 0..100_000 {
            let u = s.sample(&mut src);
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn invalid_beta_shape() {
        assert!(NucleationLaw::Beta { shape: 0.0 }.sampler().is_err());
        assert!(NucleationLaw::Beta { shape: -1.0 }.validate().is_err());
        let mut src = RandomSource::from_seed(0);
        assert!(sample_split_fraction(&NucleationLaw::Beta { shape: -2.0 }, &mut src).is_err());
    }

    #[test]
    fn direction_frequencies() {
        let mut src = RandomSource::from_seed(9);
        let always = DirectionLaw::Planar { p: 1.0 };
        assert!((0..10_000).all(|_| sample_direction(&always, &mut src) == Orientation::Horizontal));

        let n = 1_000_000;
        let law = DirectionLaw::Planar { p: 0.3 };
        let h = (0..n)
            .filter(|_| sample_direction(&law, &mut src) == Orientation::Horizontal)
            .count();
        assert!((h as f64 / n as f64 - 0.3).abs() < 0.002);

        let law = DirectionLaw::unbiased_3d();
        let mut counts = [0usize; 3];
        for _ in 0..n {
            match sample_direction(&law, &mut src) {
                Orientation::Axis1 => counts[0] += 1,
                Orientation::Axis2 => counts[1] += 1,
                Orientation::Axis3 => counts[2] += 1,
                o => panic!("unexpected {o:?}"),
            }
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.002);
        }
    }

    #[test]
    fn direction_validation() {
        assert!(DirectionLaw::Planar { p: 1.2 }.validate().is_err());
        assert!(DirectionLaw::Spatial { weights: [0.5, 0.5, 0.5] }.validate().is_err());
        assert!(DirectionLaw::Spatial { weights: [1.0, 0.0, 0.0] }.validate().is_ok());
    }
}
