//! The value group `Gamma = R_{>0} x Z` with the lexicographic order, plus `0`.

use std::cmp::Ordering;
use std::fmt;

use crate::rational::{fmt_q, qi, Q};

/// `p^{-e} (1^+)^k`, or the zero value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaValue {
    pub e: Q,
    pub k: i64,
    pub zero: bool,
}

impl GammaValue {
    pub fn new(e: Q, k: i64) -> Self {
        GammaValue { e, k, zero: false }
    }

    pub fn zero() -> Self {
        GammaValue { e: qi(0), k: 0, zero: true }
    }

    pub fn one() -> Self {
        GammaValue::new(qi(0), 0)
    }

    /// `1^+`.
    pub fn one_plus() -> Self {
        GammaValue::new(qi(0), 1)
    }

    /// `1^-`.
    pub fn one_minus() -> Self {
        GammaValue::new(qi(0), -1)
    }

    pub fn mul(&self, other: &GammaValue) -> GammaValue {
        if self.zero || other.zero {
            return GammaValue::zero();
        }
        GammaValue::new(self.e + other.e, self.k + other.k)
    }

    /// Inverse of a nonzero value.
    pub fn inv(&self) -> Option<GammaValue> {
        (!self.zero).then(|| GammaValue::new(-self.e, -self.k))
    }

    pub fn max(self, other: GammaValue) -> GammaValue {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Ord for GammaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.zero, other.zero) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            // a smaller exponent is a larger norm
            (false, false) => other.e.cmp(&self.e).then(self.k.cmp(&other.k)),
        }
    }
}

impl PartialOrd for GammaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "(p^-({}), {})", fmt_q(&self.e), self.k)
        }
    }
}
