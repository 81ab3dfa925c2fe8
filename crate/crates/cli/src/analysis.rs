//! Ensemble statistics shared by `analyze`, `reproduce-table1` and the
//! acceptance suite.

use frag_core::engine::{FragmentationRun, Model, Scheduler};
use frag_core::geometry::{Fragment2D, Orientation};
use frag_core::random::DirectionLaw;
use frag_core::stats::{
    average_histograms, build_histogram, mean_std, normalize_to_reference, select_xmin, Histogram2D, PowerLawFit,
};
use frag_core::theory::{cumulative_exponent_3d, density_exponent};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::ensemble::Ensemble;
use crate::error::{CliError, Result};

/// Interfaces whose sizes carry the power-law tail.
pub fn tail_orientation(model: Model) -> Orientation {
    match model {
        Model::Cuboid3D => Orientation::Axis3,
        Model::Rect2D | Model::Triangle2D => Orientation::Horizontal,
    }
}

/// Predicted density exponent of the tail sizes, where theory gives one.
pub fn predicted_density_exponent(cfg: &ExperimentConfig) -> Option<f64> {
    match (cfg.model, cfg.direction) {
        (Model::Rect2D, DirectionLaw::Planar { p }) if cfg.nucleation == frag_core::random::NucleationLaw::Uniform => {
            density_exponent(p).ok()
        }
        (Model::Cuboid3D, DirectionLaw::Spatial { weights })
            if weights.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12)
                && cfg.nucleation == frag_core::random::NucleationLaw::Uniform =>
        {
            Some(-1.0 - cumulative_exponent_3d())
        }
        _ => None,
    }
}

/// Refuse tail fits where the interface count of the complete
/// fragmentation is infinite.
pub fn guard_tail(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.run_config(0).divergent_tail() {
        let prob = match cfg.direction {
            DirectionLaw::Planar { p } => p,
            DirectionLaw::Spatial { weights } => weights[2],
        };
        return Err(CliError::Refused(format!(
            "horizontal split probability {prob} >= 1/2: the number of interfaces above any size \
             is infinite (or of infinite mean) in the limit, so there is no power-law tail to fit"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub realization: u64,
    pub samples: usize,
    pub xmin: f64,
    pub alpha_hat: f64,
    pub density_exponent: f64,
    pub stderr: f64,
    pub ks: f64,
    pub n_tail: usize,
}

impl FitRecord {
    pub fn new(realization: u64, samples: usize, fit: &PowerLawFit) -> Self {
        Self {
            realization,
            samples,
            xmin: fit.xmin,
            alpha_hat: fit.alpha_hat,
            density_exponent: fit.density_exponent(),
            stderr: fit.stderr,
            ks: fit.ks,
            n_tail: fit.n_tail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub realizations: usize,
    pub mean_exponent: f64,
    /// Sample standard deviation across realizations (`n - 1`), zero for
    /// a single realization.
    pub std_exponent: f64,
    pub predicted: Option<f64>,
}

impl FitSummary {
    pub fn of(fits: &[FitRecord], predicted: Option<f64>) -> Result<Self> {
        let xs: Vec<f64> = fits.iter().map(|f| f.density_exponent).collect();
        let (mean, std) = match xs.len() {
            0 => return Err(CliError::Core(frag_core::Error::InsufficientData("no fits".into()))),
            1 => (xs[0], 0.0),
            _ => mean_std(&xs)?,
        };
        Ok(Self {
            realizations: xs.len(),
            mean_exponent: mean,
            std_exponent: std,
            predicted,
        })
    }
}

pub fn fit_sizes(realization: u64, sizes: &[f64]) -> Result<FitRecord> {
    let fit = select_xmin(sizes)?;
    Ok(FitRecord::new(realization, sizes.len(), &fit))
}

pub fn fit_run(realization: u64, run: &FragmentationRun) -> Result<FitRecord> {
    fit_sizes(realization, &run.interface_sizes(tail_orientation(run.model)))
}

/// Simulate and fit every realization without keeping the runs.
pub fn fit_ensemble(cfg: &ExperimentConfig, ens: &Ensemble) -> Result<Vec<FitRecord>> {
    guard_tail(cfg)?;
    ens.map(cfg.realizations, |i| {
        let run = frag_core::engine::run_fragmentation(&cfg.run_config(i))?;
        fit_run(i, &run)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum HistogramValues {
    /// Mean fragment count per bin.
    Counts,
    /// `ln(mean count) / t`, the empirical exponential growth rate.
    LogRate,
}

/// Peak value and location a normalized histogram is matched to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub value: f64,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

/// Reference peak of the analytic density for a config: `f_p` peaks at
/// 1 on `(1 - p, p)` for largest-first runs, `g` peaks at `ln 2` on
/// `(1/2, 1/2)` for discrete generations at `p = 1/2`; otherwise the
/// histogram is scaled to peak 1 in place.
pub fn reference_for(cfg: &ExperimentConfig) -> Reference {
    match (cfg.scheduler, cfg.direction) {
        (Scheduler::LargestAreaFirst, DirectionLaw::Planar { p }) => Reference {
            value: 1.0,
            x: Some(1.0 - p),
            y: Some(p),
        },
        (Scheduler::DiscreteGenerations, DirectionLaw::Planar { p: 0.5 }) => Reference {
            value: std::f64::consts::LN_2,
            x: Some(0.5),
            y: Some(0.5),
        },
        _ => Reference {
            value: 1.0,
            x: None,
            y: None,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramResult {
    /// Mean counts over realizations, unshifted.
    pub counts: Histogram2D,
    /// Transformed, peak-normalized and optionally shifted values.
    pub values: Histogram2D,
    pub time_mean: f64,
    pub realizations: usize,
}

/// Average log-coordinate histograms of final populations and normalize.
/// Each item is one realization's rectangles and the time its log
/// coordinates are taken at.
pub fn histogram_ensemble(
    pops: &[(&[Fragment2D], f64)],
    bin_width: f64,
    values: HistogramValues,
    reference: Reference,
    shift: bool,
) -> Result<HistogramResult> {
    let hists = pops
        .iter()
        .map(|(f, t)| build_histogram(f, *t, bin_width))
        .collect::<frag_core::Result<Vec<_>>>()?;
    finish_histograms(&hists, pops.iter().map(|p| p.1).sum::<f64>() / pops.len().max(1) as f64, values, reference, shift)
}

/// Normalize already built per-realization histograms.
pub fn finish_histograms(
    hists: &[Histogram2D],
    time_mean: f64,
    values: HistogramValues,
    reference: Reference,
    shift: bool,
) -> Result<HistogramResult> {
    let counts = average_histograms(hists)?;
    let transformed = match values {
        HistogramValues::Counts => counts.clone(),
        HistogramValues::LogRate => counts.map_values(|c| c.ln() / time_mean),
    };
    let top = counts.argmax().ok_or_else(|| frag_core::Error::InsufficientData("empty histogram".into()))?;
    let location = match (reference.x, reference.y) {
        (Some(x), Some(y)) => (x, y),
        _ => top.center(counts.bin_width),
    };
    let values = normalize_to_reference(&transformed, reference.value, location, shift)?;
    Ok(HistogramResult {
        counts,
        values,
        time_mean,
        realizations: hists.len(),
    })
}

/// Pearson correlation between histogram values and `curve` at the bin
/// centres, over the smallest set of bins holding `mass` of the counts.
/// Returns `(r, bins used, bins skipped)`; bins where the curve is not
/// finite are skipped.
pub fn correlate_with_curve(
    result: &HistogramResult,
    mass: f64,
    curve: impl Fn(f64, f64) -> Option<f64>,
) -> Result<(f64, usize, usize)> {
    let h = &result.values;
    let w = h.bin_width;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut skipped = 0;
    for b in result.counts.mass_core_bins(mass) {
        let v = h.get(b.i, b.j);
        let cx = h.x_origin + (b.i as f64 + 0.5) * w;
        let cy = h.y_origin + (b.j as f64 + 0.5) * w;
        match curve(cx, cy) {
            Some(c) if c.is_finite() && v.is_finite() => {
                xs.push(v);
                ys.push(c);
            }
            _ => skipped += 1,
        }
    }
    let r = frag_core::stats::pearson(&xs, &ys)?;
    Ok((r, xs.len(), skipped))
}
