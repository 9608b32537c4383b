use super::{fmt_frac, frac_to_f64, BigFraction};
use crate::{Error, Result};
use std::fmt;

/// Closed rational interval `[lo, hi]` with `lo < hi`.
///
/// Used as a certified enclosure: the irrational it encloses lies strictly
/// between the endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: BigFraction,
    hi: BigFraction,
}

impl RatInterval {
    pub fn new(lo: BigFraction, hi: BigFraction) -> Result<Self> {
        if lo >= hi {
            return Err(Error::BadParameter(format!(
                "degenerate interval [{}, {}]",
                fmt_frac(&lo),
                fmt_frac(&hi)
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Skips the ordering check; for enclosures that are proper by construction.
    pub(crate) fn new_unchecked(lo: BigFraction, hi: BigFraction) -> Self {
        Self { lo, hi }
    }

    /// Interval spanned by two distinct endpoints in either order.
    pub fn spanning(a: BigFraction, b: BigFraction) -> Result<Self> {
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn lo(&self) -> &BigFraction {
        &self.lo
    }

    pub fn hi(&self) -> &BigFraction {
        &self.hi
    }

    pub fn width(&self) -> BigFraction {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &BigFraction) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        Self::new(lo, hi).ok()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (frac_to_f64(&self.lo), frac_to_f64(&self.hi))
    }

    pub fn into_parts(self) -> (BigFraction, BigFraction) {
        (self.lo, self.hi)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_frac(&self.lo), fmt_frac(&self.hi))
    }
}
