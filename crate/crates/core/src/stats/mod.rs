//! Empirical statistics of fragmentation runs.

mod histogram;
mod oracle;
mod powerlaw;
mod tail;

pub use histogram::{
    average_histograms, build_histogram, histogram_of_points, log_coord_sum, log_coords,
    normalize_to_reference, Bin, Histogram2D, DEFAULT_BIN_WIDTH,
};
pub use oracle::{t0_mean_estimate, t0_mean_oracle, MeanEstimate};
pub use powerlaw::{mle_exponent, select_xmin, PowerLawFit, MAX_CANDIDATES, MIN_SAMPLES, MIN_TAIL};
pub use tail::{ccdf, mean_std, pearson, Ccdf};
