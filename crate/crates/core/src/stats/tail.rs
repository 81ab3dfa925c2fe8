use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::math::{ln, sqrt};

/// Tail counting function `x -> #{i : x_i >= x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ccdf {
    sorted: Vec<f64>,
}

impl Ccdf {
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn count_ge(&self, x: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|v| *v < x)
    }

    /// `(x, count_ge(x))` at each distinct sample value, ascending.
    pub fn points(&self) -> Vec<(f64, usize)> {
        let n = self.sorted.len();
        let mut out = Vec::new();
        for (k, &x) in self.sorted.iter().enumerate() {
            if k == 0 || self.sorted[k - 1] != x {
                out.push((x, n - k));
            }
        }
        out
    }

    /// Least-squares slope of `ln count` against `ln x` over the distinct
    /// values at least `xmin`.
    pub fn loglog_slope(&self, xmin: f64) -> Result<f64> {
        if !(xmin > 0.0) {
            return Err(domain!("xmin must be positive, got {xmin}"));
        }
        let pts: Vec<(f64, f64)> = self
            .points()
            .into_iter()
            .filter(|(x, _)| *x >= xmin)
            .map(|(x, c)| (ln(x), ln(c as f64)))
            .collect();
        if pts.len() < 2 {
            return Err(Error::InsufficientData("fewer than two distinct tail values".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        linear_slope(&xs, &ys)
    }
}

/// Tail counting function of positive samples.
pub fn ccdf(samples: &[f64]) -> Result<Ccdf> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(domain!("samples contain NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Ccdf { sorted })
}

fn moments(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData("need two or more paired values".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok((sxx, syy, sxy))
}

fn linear_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let (sxx, _, sxy) = moments(xs, ys)?;
    if sxx == 0.0 {
        return Err(domain!("abscissae are all equal"));
    }
    Ok(sxy / sxx)
}

/// Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let (sxx, syy, sxy) = moments(xs, ys)?;
    if sxx == 0.0 || syy == 0.0 {
        return Err(domain!("a series is constant"));
    }
    Ok(sxy / sqrt(sxx * syy))
}

/// Sample mean and standard deviation (`n - 1` denominator).
pub fn mean_std(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return Ok((m, 0.0));
    }
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    Ok((m, sqrt(v)))
}
