use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::geometry::Fragment2D;
use crate::math::{floor, ln};

/// Default bin width of log-coordinate histograms.
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

/// Normalized log coordinates `(-ln a / t, -ln b / t)`.
pub fn log_coords(a: f64, b: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(domain!("time must be positive, got {t}"));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(domain!("sides must be positive, got ({a}, {b})"));
    }
    Ok((-ln(a) / t, -ln(b) / t))
}

/// `-ln(measure) / t`, the coordinate sum computed without rounding the
/// two logarithms separately.
pub fn log_coord_sum(measure: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && measure > 0.0) {
        return Err(domain!("need positive measure and time, got ({measure}, {t})"));
    }
    Ok(-ln(measure) / t)
}

/// Counts on the lattice `origin + (i, j) * bin_width`.
///
/// The lattice is unbounded; storage covers the bins `i_lo .. i_lo + nx`
/// by `j_lo .. j_lo + ny` and grows when a point falls outside.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram2D {
    pub x_origin: f64,
    pub y_origin: f64,
    pub bin_width: f64,
    i_lo: i64,
    j_lo: i64,
    nx: usize,
    ny: usize,
    counts: Vec<f64>,
    pub n_total: f64,
}

/// One stored bin: lower-left corner, lattice index and value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bin {
    pub i: i64,
    pub j: i64,
    pub x_lo: f64,
    pub y_lo: f64,
    pub value: f64,
}

impl Bin {
    pub fn center(&self, bin_width: f64) -> (f64, f64) {
        (self.x_lo + 0.5 * bin_width, self.y_lo + 0.5 * bin_width)
    }
}

impl Histogram2D {
    pub fn new(x_origin: f64, y_origin: f64, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(domain!("bin width must be positive, got {bin_width}"));
        }
        Ok(Self {
            x_origin,
            y_origin,
            bin_width,
            i_lo: 0,
            j_lo: 0,
            nx: 0,
            ny: 0,
            counts: Vec::new(),
            n_total: 0.0,
        })
    }

    pub fn index_of(&self, x: f64, y: f64) -> (i64, i64) {
        (
            floor((x - self.x_origin) / self.bin_width) as i64,
            floor((y - self.y_origin) / self.bin_width) as i64,
        )
    }

    pub fn add(&mut self, x: f64, y: f64) {
        let (i, j) = self.index_of(x, y);
        self.ensure(i, j, i, j);
        let k = self.offset(i, j).expect("grid extended");
        self.counts[k] += 1.0;
        self.n_total += 1.0;
    }

    /// Value of bin `(i, j)`; zero outside the stored range.
    pub fn get(&self, i: i64, j: i64) -> f64 {
        self.offset(i, j).map_or(0.0, |k| self.counts[k])
    }

    /// Stored index range `(i_lo, j_lo, nx, ny)`.
    pub fn extent(&self) -> (i64, i64, usize, usize) {
        (self.i_lo, self.j_lo, self.nx, self.ny)
    }

    pub fn bins(&self) -> impl Iterator<Item = Bin> + '_ {
        (0..self.nx).flat_map(move |di| {
            (0..self.ny).map(move |dj| {
                let (i, j) = (self.i_lo + di as i64, self.j_lo + dj as i64);
                Bin {
                    i,
                    j,
                    x_lo: self.x_origin + i as f64 * self.bin_width,
                    y_lo: self.y_origin + j as f64 * self.bin_width,
                    value: self.counts[di * self.ny + dj],
                }
            })
        })
    }

    /// Sum of the stored values.
    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// First bin (in `bins()` order) holding the maximum value.
    pub fn argmax(&self) -> Option<Bin> {
        self.bins().fold(None, |best: Option<Bin>, b| match best {
            Some(c) if c.value >= b.value => Some(c),
            _ => Some(b),
        })
    }

    /// Apply `f` to every stored value.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.counts {
            *v = f(*v);
        }
        out
    }

    /// Smallest set of bins, largest first, holding at least `fraction` of
    /// the total.
    pub fn mass_core_bins(&self, fraction: f64) -> Vec<Bin> {
        let mut bins: Vec<Bin> = self.bins().filter(|b| b.value > 0.0).collect();
        bins.sort_by(|a, b| b.value.total_cmp(&a.value).then((a.i, a.j).cmp(&(b.i, b.j))));
        let target = fraction * self.total();
        let mut acc = 0.0;
        let mut n = 0;
        for b in &bins {
            if acc >= target {
                break;
            }
            acc += b.value;
            n += 1;
        }
        bins.truncate(n);
        bins
    }

    fn offset(&self, i: i64, j: i64) -> Option<usize> {
        let (di, dj) = (i - self.i_lo, j - self.j_lo);
        if di < 0 || dj < 0 || di as usize >= self.nx || dj as usize >= self.ny {
            return None;
        }
        Some(di as usize * self.ny + dj as usize)
    }

    /// Grow storage to cover `[i0, i1] x [j0, j1]`.
    fn ensure(&mut self, i0: i64, j0: i64, i1: i64, j1: i64) {
        let (new_i_lo, new_j_lo, new_i_hi, new_j_hi) = if self.nx == 0 {
            (i0, j0, i1, j1)
        } else {
            (
                self.i_lo.min(i0),
                self.j_lo.min(j0),
                (self.i_lo + self.nx as i64 - 1).max(i1),
                (self.j_lo + self.ny as i64 - 1).max(j1),
            )
        };
        let nx = (new_i_hi - new_i_lo + 1) as usize;
        let ny = (new_j_hi - new_j_lo + 1) as usize;
        if nx == self.nx && ny == self.ny && new_i_lo == self.i_lo && new_j_lo == self.j_lo {
            return;
        }
        let mut counts = alloc::vec![0.0; nx * ny];
        for di in 0..self.nx {
            for dj in 0..self.ny {
                let ni = (self.i_lo + di as i64 - new_i_lo) as usize;
                let nj = (self.j_lo + dj as i64 - new_j_lo) as usize;
                counts[ni * ny + nj] = self.counts[di * self.ny + dj];
            }
        }
        self.i_lo = new_i_lo;
        self.j_lo = new_j_lo;
        self.nx = nx;
        self.ny = ny;
        self.counts = counts;
    }
}

/// Histogram of points on a lattice anchored at `origin`.
pub fn histogram_of_points(points: &[(f64, f64)], origin: (f64, f64), bin_width: f64) -> Result<Histogram2D> {
    let mut h = Histogram2D::new(origin.0, origin.1, bin_width)?;
    if let Some((xs, ys)) = bounds(points) {
        let (i0, j0) = h.index_of(xs.0, ys.0);
        let (i1, j1) = h.index_of(xs.1, ys.1);
        h.ensure(i0, j0, i1, j1);
    }
    for &(x, y) in points {
        h.add(x, y);
    }
    Ok(h)
}

fn bounds(points: &[(f64, f64)]) -> Option<((f64, f64), (f64, f64))> {
    let first = points.first()?;
    let mut xs = (first.0, first.0);
    let mut ys = (first.1, first.1);
    for &(x, y) in points {
        xs = (xs.0.min(x), xs.1.max(x));
        ys = (ys.0.min(y), ys.1.max(y));
    }
    Some((xs, ys))
}

/// Histogram of rectangles in log coordinates at time `t`, origin `(0, 0)`.
pub fn build_histogram(fragments: &[Fragment2D], t: f64, bin_width: f64) -> Result<Histogram2D> {
    let points = fragments
        .iter()
        .map(|f| log_coords(f.a, f.b, t))
        .collect::<Result<Vec<_>>>()?;
    histogram_of_points(&points, (0.0, 0.0), bin_width)
}

/// Pointwise mean over histograms on the same lattice.
pub fn average_histograms(hists: &[Histogram2D]) -> Result<Histogram2D> {
    let first = hists
        .first()
        .ok_or_else(|| Error::InsufficientData("no histograms to average".into()))?;
    let mut out = Histogram2D::new(first.x_origin, first.y_origin, first.bin_width)?;
    for h in hists {
        if h.x_origin != first.x_origin || h.y_origin != first.y_origin || h.bin_width != first.bin_width {
            return Err(Error::GridMismatch(alloc::format!(
                "origin ({}, {}) width {} vs origin ({}, {}) width {}",
                h.x_origin, h.y_origin, h.bin_width, first.x_origin, first.y_origin, first.bin_width
            )));
        }
        if h.nx > 0 {
            out.ensure(h.i_lo, h.j_lo, h.i_lo + h.nx as i64 - 1, h.j_lo + h.ny as i64 - 1);
        }
    }
    let n = hists.len() as f64;
    for h in hists {
        for b in h.bins() {
            let k = out.offset(b.i, b.j).expect("union extent");
            out.counts[k] += b.value / n;
        }
        out.n_total += h.n_total / n;
    }
    Ok(out)
}

/// Scale so the maximum equals `peak_value`; with `shift`, also translate
/// the lattice so the centre of the maximal bin lands on `peak_location`.
pub fn normalize_to_reference(
    hist: &Histogram2D,
    peak_value: f64,
    peak_location: (f64, f64),
    shift: bool,
) -> Result<Histogram2D> {
    let top = hist
        .argmax()
        .filter(|b| b.value > 0.0)
        .ok_or_else(|| domain!("histogram has no positive bin"))?;
    let scale = peak_value / top.value;
    let mut out = hist.map_values(|v| v * scale);
    let k = out.offset(top.i, top.j).expect("argmax is stored");
    out.counts[k] = peak_value;
    if shift {
        let (cx, cy) = top.center(hist.bin_width);
        out.x_origin += peak_location.0 - cx;
        out.y_origin += peak_location.1 - cy;
    }
    Ok(out)
}
