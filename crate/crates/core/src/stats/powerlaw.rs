//! Continuous power-law fits: maximum likelihood exponent with the lower
//! cutoff chosen by Kolmogorov-Smirnov distance.

use alloc::vec::Vec;

use crate::error::{domain, numeric, Error, Result};
use crate::math::{exp, ln, sqrt};

/// Fewest samples [`select_xmin`] accepts.
pub const MIN_SAMPLES: usize = 50;
/// Fewest tail samples a candidate cutoff may leave.
pub const MIN_TAIL: usize = 10;
/// Most cutoffs scanned by [`select_xmin`].
pub const MAX_CANDIDATES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub xmin: f64,
    /// Magnitude of the density exponent.
    pub alpha_hat: f64,
    pub ks: f64,
    pub stderr: f64,
    pub n_tail: usize,
}

impl PowerLawFit {
    /// Signed density exponent, `-alpha_hat`.
    pub fn density_exponent(&self) -> f64 {
        -self.alpha_hat
    }

    /// Cumulative exponent magnitude, `alpha_hat - 1`.
    pub fn cumulative_exponent(&self) -> f64 {
        self.alpha_hat - 1.0
    }
}

fn check_positive(samples: &[f64]) -> Result<()> {
    match samples.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        Some(x) => Err(domain!("samples must be positive and finite, found {x}")),
        None => Ok(()),
    }
}

/// `alpha = 1 + n / sum ln(x / xmin)` over samples at least `xmin`, with
/// standard error `(alpha - 1) / sqrt(n)`.
pub fn mle_exponent(samples: &[f64], xmin: f64) -> Result<(f64, f64)> {
    check_positive(samples)?;
    if !(xmin > 0.0) {
        return Err(domain!("xmin must be positive, got {xmin}"));
    }
    let lx = ln(xmin);
    let (n, s) = samples
        .iter()
        .filter(|x| **x >= xmin)
        .fold((0usize, 0.0), |(n, s), x| (n + 1, s + (ln(*x) - lx)));
    if n < 2 {
        return Err(Error::InsufficientData(alloc::format!(
            "{n} samples at or above xmin = {xmin}"
        )));
    }
    if !(s > 0.0) {
        return Err(numeric!("all tail samples equal xmin; the estimator diverges"));
    }
    let alpha = 1.0 + n as f64 / s;
    Ok((alpha, (alpha - 1.0) / sqrt(n as f64)))
}

/// Scan cutoffs over the distinct sample values and keep the fit whose
/// tail is closest to the fitted model in KS distance.
pub fn select_xmin(samples: &[f64]) -> Result<PowerLawFit> {
    check_positive(samples)?;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData(alloc::format!(
            "{} samples, need at least {MIN_SAMPLES}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let logs: Vec<f64> = sorted.iter().map(|x| ln(*x)).collect();
    let n = sorted.len();
    let mut suffix = alloc::vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + logs[k];
    }
    // first index of each distinct value
    let mut starts: Vec<usize> = Vec::new();
    for k in 0..n {
        if k == 0 || sorted[k] != sorted[k - 1] {
            starts.push(k);
        }
    }
    // a cutoff must leave MIN_TAIL samples and at least two distinct values
    let usable: Vec<usize> = starts
        .iter()
        .copied()
        .filter(|&k| n - k >= MIN_TAIL && sorted[n - 1] > sorted[k])
        .collect();
    if usable.is_empty() {
        return Err(Error::InsufficientData("no cutoff leaves a usable tail".into()));
    }
    let m = usable.len();
    let candidates: Vec<usize> = if m <= MAX_CANDIDATES {
        usable
    } else {
        let mut c: Vec<usize> = (0..MAX_CANDIDATES)
            .map(|i| usable[i * (m - 1) / (MAX_CANDIDATES - 1)])
            .collect();
        c.dedup();
        c
    };
    let mut best: Option<PowerLawFit> = None;
    for start in candidates {
        let fit = fit_tail(&sorted, &logs, &suffix, start);
        let better = match &best {
            None => true,
            Some(b) => fit.ks < b.ks || (fit.ks == b.ks && fit.xmin < b.xmin),
        };
        if better {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn fit_tail(sorted: &[f64], logs: &[f64], suffix: &[f64], start: usize) -> PowerLawFit {
    let xmin = sorted[start];
    let lmin = logs[start];
    let n = sorted.len() - start;
    let nf = n as f64;
    let alpha = 1.0 + nf / (suffix[start] - nf * lmin);
    let mut ks: f64 = 0.0;
    let mut k = start;
    while k < sorted.len() {
        // block of ties [k, e)
        let mut e = k + 1;
        while e < sorted.len() && sorted[e] == sorted[k] {
            e += 1;
        }
        let model = 1.0 - exp((1.0 - alpha) * (logs[k] - lmin));
        let below = (k - start) as f64 / nf;
        let upto = (e - start) as f64 / nf;
        ks = ks.max((model - below).abs()).max((model - upto).abs());
        k = e;
    }
    PowerLawFit {
        xmin,
        alpha_hat: alpha,
        ks,
        stderr: (alpha - 1.0) / sqrt(nf),
        n_tail: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let (a, se) = mle_exponent(&[1.0, 2.0, 4.0, 8.0], 1.0).unwrap();
        let expected = 1.0 + 4.0 / (6.0 * core::f64::consts::LN_2);
        assert!((a - expected).abs() < 1e-12);
        assert!((se - (expected - 1.0) / 2.0).abs() < 1e-12);
        assert!((a - 1.9617966939259757).abs() < 1e-12);
    }

    #[test]
    fn mle_errors() {
        assert!(mle_exponent(&[2.0, 2.0, 2.0], 2.0).is_err());
        assert!(mle_exponent(&[1.0, 2.0, -1.0], 1.0).is_err());
        assert!(matches!(mle_exponent(&[1.0, 2.0], 1.5), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn select_needs_samples() {
        assert!(select_xmin(&[1.0; 10]).is_err());
        assert!(select_xmin(&[1.0; 100]).is_err());
    }

    #[test]
    fn ks_is_minimum_over_candidates() {
        let samples: Vec<f64> = (1..=300).map(|k| libm::pow(1.0 - k as f64 / 301.0, -1.0 / 2.5)).collect();
        let fit = select_xmin(&samples).unwrap();
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let logs: Vec<f64> = sorted.iter().map(|x| libm::log(*x)).collect();
        let mut suffix = alloc::vec![0.0; sorted.len() + 1];
        for k in (0..sorted.len()).rev() {
            suffix[k] = suffix[k + 1] + logs[k];
        }
        for start in 0..sorted.len() - MIN_TAIL {
            assert!(fit_tail(&sorted, &logs, &suffix, start).ks >= fit.ks);
        }
        let (a, _) = mle_exponent(&samples, fit.xmin).unwrap();
        assert!((a - fit.alpha_hat).abs() < 1e-12);
    }
}
