//! Point descriptors, their classification, and the disc geometry relating them.

use std::fmt;

use crate::coeff::{CoeffElem, NormExp};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};
use crate::robba::RobbaElem;
use crate::witt::{Ring, WittElem};

use std::sync::Arc;

use super::presentation::{center_exp, eval_h};
use super::{Radius, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointDescriptor {
    /// `beta_{u, r}`.
    Center { u: CoeffElem, radius: Radius },
    /// A finite prefix `(u_j, rho_j)` of a strictly decreasing disc sequence.
    Type4Prefix { discs: Vec<(CoeffElem, Q)> },
    /// `beta_{u, r^{+-}}`.
    Type5 { u: CoeffElem, rho: Q, sign: Sign },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointType {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5,
}

impl PointType {
    pub fn number(self) -> u8 {
        match self {
            PointType::Type1 => 1,
            PointType::Type2 => 2,
            PointType::Type3 => 3,
            PointType::Type4 => 4,
            PointType::Type5 => 5,
        }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}", self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscRelation {
    Equal,
    AContainsB,
    BContainsA,
    Disjoint,
}

impl DiscRelation {
    pub fn name(self) -> &'static str {
        match self {
            DiscRelation::Equal => "equal",
            DiscRelation::AContainsB => "a_contains_b",
            DiscRelation::BContainsA => "b_contains_a",
            DiscRelation::Disjoint => "disjoint",
        }
    }
}

fn ring_for(u: &CoeffElem, ring: &Arc<Ring>) -> Result<()> {
    center_exp(u, ring.field()).map(|_| ())
}

/// Exponent of the distance `H(u', 0)(w - [u])` between two centers.
pub fn center_distance(ring: &Arc<Ring>, u: &CoeffElem, u2: &CoeffElem) -> Result<NormExp> {
    ring_for(u, ring)?;
    ring_for(u2, ring)?;
    let pi = RobbaElem::from_witt(&WittElem::linear(ring, u)?);
    eval_h(u2, &Radius::Zero, &pi)
}

/// Whether `beta_{u, r} = beta_{u', r}`, i.e. `r/p >= H(u', 0)(w - [u])`.
pub fn same_point(ring: &Arc<Ring>, u: &CoeffElem, u2: &CoeffElem, radius: &Radius) -> Result<bool> {
    radius.validate()?;
    if u == u2 {
        ring_for(u, ring)?;
        return Ok(true);
    }
    let d = center_distance(ring, u, u2)?;
    match (radius.weight(), d) {
        (Some(w), NormExp::Exact(e)) => Ok(w <= e),
        (Some(w), NormExp::Below(b)) if w <= b => Ok(true),
        (None, NormExp::Exact(_)) => Ok(false),
        (None, NormExp::Below(_)) if u.approx_eq(u2) => Ok(true),
        (_, NormExp::Below(b)) => Err(Error::indeterminate(format!(
            "center distance is below p^-({}) and cannot be compared with r/p",
            fmt_q(&b)
        ))),
    }
}

/// Containment relation between `D(u, r)` and `D(u', r')`, the discs of
/// centers within `r/p` (resp. `r'/p`).
pub fn disc_relation(ring: &Arc<Ring>, a: (&CoeffElem, &Radius), b: (&CoeffElem, &Radius)) -> Result<DiscRelation> {
    a.1.validate()?;
    b.1.validate()?;
    let by_radius = || match a.1.cmp_radius(b.1) {
        std::cmp::Ordering::Greater => DiscRelation::AContainsB,
        std::cmp::Ordering::Less => DiscRelation::BContainsA,
        std::cmp::Ordering::Equal => DiscRelation::Equal,
    };
    if a.0 == b.0 {
        ring_for(a.0, ring)?;
        return Ok(by_radius());
    }
    let d = center_distance(ring, a.0, b.0)?;
    // the discs meet iff the distance is at most the larger radius
    let larger = a.1.max(*b.1);
    let meet = match (larger.weight(), d) {
        (Some(w), NormExp::Exact(e)) => w <= e,
        (Some(w), NormExp::Below(bd)) if w <= bd => true,
        (None, NormExp::Exact(_)) => false,
        (None, NormExp::Below(_)) if a.0.approx_eq(b.0) => true,
        (_, NormExp::Below(bd)) => {
            return Err(Error::indeterminate(format!("center distance below p^-({}) is undecided", fmt_q(&bd))))
        }
    };
    Ok(if meet { by_radius() } else { DiscRelation::Disjoint })
}

fn validate(ring: &Arc<Ring>, d: &PointDescriptor) -> Result<()> {
    match d {
        PointDescriptor::Center { u, radius } => {
            ring_for(u, ring)?;
            radius.validate()
        }
        PointDescriptor::Type5 { u, rho, .. } => {
            ring_for(u, ring)?;
            Radius::Exp(*rho).validate()
        }
        PointDescriptor::Type4Prefix { discs } => {
            if discs.is_empty() {
                return Err(Error::precondition("a type-4 prefix needs at least one disc"));
            }
            for (u, rho) in discs {
                ring_for(u, ring)?;
                Radius::Exp(*rho).validate()?;
            }
            for pair in discs.windows(2) {
                let rel =
                    disc_relation(ring, (&pair[0].0, &Radius::Exp(pair[0].1)), (&pair[1].0, &Radius::Exp(pair[1].1)))?;
                if rel != DiscRelation::AContainsB {
                    return Err(Error::precondition(format!(
                        "type-4 discs must be strictly nested, got {} for consecutive discs",
                        rel.name()
                    )));
                }
            }
            Ok(())
        }
    }
}

/// Type of the point a descriptor denotes.
///
/// A center with `r = 0` is type 1; with `r > 0` it is type 2 when `rho`
/// lies in the value group of `L` and type 3 otherwise. A type-5 descriptor
/// whose radius is outside the value group denotes the same point as the
/// rank-1 `beta_{u, r}`, so it is reported as type 3.
pub fn classify(ring: &Arc<Ring>, d: &PointDescriptor) -> Result<PointType> {
    validate(ring, d)?;
    let field = ring.field();
    Ok(match d {
        PointDescriptor::Center { radius: Radius::Zero, .. } => PointType::Type1,
        PointDescriptor::Center { radius: Radius::Exp(rho), .. } => {
            if field.in_value_group(rho) {
                PointType::Type2
            } else {
                PointType::Type3
            }
        }
        PointDescriptor::Type4Prefix { .. } => PointType::Type4,
        PointDescriptor::Type5 { rho, .. } => {
            if field.in_value_group(rho) {
                PointType::Type5
            } else {
                PointType::Type3
            }
        }
    })
}

/// `H(d, s)`: the point of radius `max(radius(d), s)` above `d`.
///
/// For a type-4 prefix the center of the first disc whose radius is at most
/// `s` is used; such a disc contains the limit point.
pub fn radius_retract(ring: &Arc<Ring>, d: &PointDescriptor, s: &Radius) -> Result<PointDescriptor> {
    validate(ring, d)?;
    s.validate()?;
    match d {
        PointDescriptor::Center { u, radius } => Ok(PointDescriptor::Center { u: u.clone(), radius: radius.max(*s) }),
        PointDescriptor::Type4Prefix { discs } => {
            let hit = discs.iter().find(|(_, rho)| Radius::Exp(*rho).cmp_radius(s) != std::cmp::Ordering::Greater);
            match hit {
                Some((u, _)) => Ok(PointDescriptor::Center { u: u.clone(), radius: *s }),
                None => Err(Error::precondition(format!("radius {s} is below every disc of the type-4 prefix"))),
            }
        }
        PointDescriptor::Type5 { .. } => Err(Error::precondition("retraction of a type-5 descriptor is not defined")),
    }
}
