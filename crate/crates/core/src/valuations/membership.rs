//! Membership of points in rational subsets
//! `U(f_1, ..., f_n / g) = { x : |f_i(x)| <= |g(x)| != 0 }`.

use crate::coeff::NormExp;
use crate::error::{Error, Result};
use crate::robba::RobbaElem;

use super::point::PointDescriptor;
use super::presentation::{eval_beta5, eval_h};

#[derive(Clone, Debug)]
pub struct RationalSubset {
    pub fs: Vec<RobbaElem>,
    pub g: RobbaElem,
}

impl RationalSubset {
    pub fn new(fs: Vec<RobbaElem>, g: RobbaElem) -> Self {
        RationalSubset { fs, g }
    }

    pub fn contains(&self, d: &PointDescriptor) -> Result<bool> {
        rational_subset_member(d, &self.fs, &self.g)
    }
}

/// Whether the point `d` lies in `U(fs / g)`.
pub fn rational_subset_member(d: &PointDescriptor, fs: &[RobbaElem], g: &RobbaElem) -> Result<bool> {
    match d {
        PointDescriptor::Center { u, radius } => {
            let vg = eval_h(u, radius, g)?;
            if let NormExp::Below(b) = vg {
                return Err(Error::precondition(format!(
                    "|g| at the point is only bounded by p^-({b}); raise the precision"
                )));
            }
            for f in fs {
                if !eval_h(u, radius, f)?.le_norm(&vg)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        PointDescriptor::Type5 { u, rho, sign } => {
            let vg = eval_beta5(u, *rho, *sign, g)?.value;
            if vg.zero {
                return Ok(false);
            }
            for f in fs {
                if eval_beta5(u, *rho, *sign, f)?.value > vg {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        PointDescriptor::Type4Prefix { .. } => {
            Err(Error::precondition("a finite prefix does not determine membership of a type-4 point"))
        }
    }
}

/// Membership matrix of sample points against a family of rational subsets.
#[derive(Debug)]
pub struct CoveringReport {
    /// `membership[j][i]`: sample `j` in subset `i`.
    pub membership: Vec<Vec<Result<bool>>>,
    /// Samples decided to lie in no subset.
    pub uncovered: Vec<usize>,
    /// Samples in no subset for sure, but with some undecided memberships.
    pub undecided: Vec<usize>,
}

impl CoveringReport {
    pub fn covers(&self) -> bool {
        self.uncovered.is_empty() && self.undecided.is_empty()
    }
}

/// Checks whether every sample point lies in at least one subset.
pub fn covering_check(subsets: &[RationalSubset], samples: &[PointDescriptor]) -> CoveringReport {
    let mut membership = Vec::with_capacity(samples.len());
    let mut uncovered = Vec::new();
    let mut undecided = Vec::new();
    for (j, d) in samples.iter().enumerate() {
        let row: Vec<Result<bool>> = subsets.iter().map(|s| s.contains(d)).collect();
        if !row.iter().any(|r| matches!(r, Ok(true))) {
            if row.iter().all(|r| r.is_ok()) {
                uncovered.push(j);
            } else {
                undecided.push(j);
            }
        }
        membership.push(row);
    }
    CoveringReport { membership, uncovered, undecided }
}
