use core::cmp::Ordering;
use core::fmt;

/// Tolerance on support-line membership, e.g. `|x + y - 1| <= SUPPORT_TOLERANCE`.
pub const SUPPORT_TOLERANCE: f64 = 1e-9;

/// A real number or negative infinity.
///
/// Rate functions of the largest-first parametrization live on a line and
/// are `-inf` everywhere else.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    NegInfinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::NegInfinity => None,
        }
    }

    /// `f64` view with `-inf` for [`ExtendedReal::NegInfinity`].
    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::NEG_INFINITY)
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::Finite(v)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (NegInfinity, NegInfinity) => Some(Ordering::Equal),
            (NegInfinity, Finite(_)) => Some(Ordering::Less),
            (Finite(_), NegInfinity) => Some(Ordering::Greater),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// Whether `(x, y)` lies on the line `x + y = 1`.
pub fn on_support(x: f64, y: f64) -> bool {
    (x + y - 1.0).abs() <= SUPPORT_TOLERANCE
}
