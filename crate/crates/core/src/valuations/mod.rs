//! Seminorms on `W(O_L)_E` and `B`, and the points of the associated
//! Berkovich and adic spectra.
//!
//! Radii are written `r = p^{-rho}` with `rho >= 0`, so `rho = 0` is the
//! Gauss point `r = 1`; the radius `r = 0` is the separate value
//! [`Radius::Zero`].

mod factor;
mod gamma;
mod membership;
mod persistence;
mod point;
mod presentation;

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

pub use factor::{factor_linear, Factorization};
pub use gamma::GammaValue;
pub use membership::{covering_check, rational_subset_member, CoveringReport, RationalSubset};
pub use persistence::persistence_interval;
pub use point::{classify, disc_relation, radius_retract, same_point, DiscRelation, PointDescriptor, PointType};
pub use presentation::{
    eval_beta5, eval_h, eval_h_with, stable_presentation, stable_presentation_with, stable_reduce, stable_reduce_with,
    Beta5Value, ReduceStrategy, StablePresentation,
};

/// A radius `r` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Radius {
    /// `r = 0`.
    Zero,
    /// `r = p^{-rho}`.
    Exp(Q),
}

impl Radius {
    /// Exponent of `r/p`, `None` for `r = 0`.
    pub fn weight(&self) -> Option<Q> {
        match self {
            Radius::Zero => None,
            Radius::Exp(rho) => Some(rho + qi(1)),
        }
    }

    pub fn exp(&self) -> Option<Q> {
        match self {
            Radius::Zero => None,
            Radius::Exp(rho) => Some(*rho),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Radius::Exp(rho) if rho.is_negative() => {
                Err(Error::precondition(format!("radius exponent must be >= 0, got {}", fmt_q(rho))))
            }
            _ => Ok(()),
        }
    }

    /// `Greater` when `self` is the larger radius.
    pub fn cmp_radius(&self, other: &Radius) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Radius::Zero, Radius::Zero) => Ordering::Equal,
            (Radius::Zero, _) => Ordering::Less,
            (_, Radius::Zero) => Ordering::Greater,
            (Radius::Exp(a), Radius::Exp(b)) => b.cmp(a),
        }
    }

    /// The larger of two radii.
    pub fn max(self, other: Radius) -> Radius {
        if self.cmp_radius(&other) == std::cmp::Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Parses `a/b` or `inf` (the radius `0`).
    pub fn parse(s: &str) -> Option<Radius> {
        let s = s.trim();
        if s == "inf" {
            return Some(Radius::Zero);
        }
        parse_q(s).map(Radius::Exp)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Zero => write!(f, "inf"),
            Radius::Exp(rho) => write!(f, "{}", fmt_q(rho)),
        }
    }
}

/// Side of a type-5 point: `r^+` or `r^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(r^{+-}/p)^i` carries `(1^+)^{+-i}`.
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s.trim() {
            "+" | "plus" => Some(Sign::Plus),
            "-" | "minus" => Some(Sign::Minus),
            _ => None,
        }
    }
}
