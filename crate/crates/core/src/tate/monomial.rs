//! Exponent vectors `I = (i_1, ..., i_n)` with the componentwise partial
//! order `<=` and the graded lexicographic total order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// An index `I` in `Z_{>=0}^n`. `Ord` is the graded lexicographic order:
/// total degree first, then the first differing coordinate decides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIndex(Vec<u32>);

impl MonomialIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MonomialIndex(exps)
    }

    pub fn zero(n: usize) -> Self {
        MonomialIndex(vec![0; n])
    }

    /// The `k`-th unit vector.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MonomialIndex(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MonomialIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MonomialIndex) -> MonomialIndex {
        MonomialIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, defined when `other <= self`.
    pub fn sub(&self, other: &MonomialIndex) -> Option<MonomialIndex> {
        other.divides(self).then(|| MonomialIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Position of `self` in the enumeration of `Z_{>=0}^n` by the graded
    /// lexicographic order, starting from 0 at the zero index.
    pub fn grlex_rank(&self) -> BigUint {
        let n = self.0.len();
        let d = self.degree();
        // indices of degree < d
        let mut rank = binomial(d + n as u64 - 1, n as u64).unwrap_or_else(BigUint::zero);
        if n == 0 {
            return rank;
        }
        // indices of degree d preceding self: walk the coordinates
        let mut remaining = d;
        for (k, &e) in self.0.iter().enumerate().take(n - 1) {
            let rest = (n - k - 1) as u64;
            for smaller in 0..e as u64 {
                // coordinate k equals `smaller`, the rest sum to remaining - smaller
                rank += compositions(remaining - smaller, rest);
            }
            remaining -= e as u64;
        }
        rank
    }
}

/// `C(a, b)`, or `None` when `b > a`.
fn binomial(a: u64, b: u64) -> Option<BigUint> {
    if b > a {
        return None;
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..b {
        acc = acc * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    Some(acc)
}

/// Number of vectors in `Z_{>=0}^k` summing to `s`.
fn compositions(s: u64, k: u64) -> BigUint {
    if k == 0 {
        return if s == 0 { BigUint::from(1u32) } else { BigUint::zero() };
    }
    binomial(s + k - 1, k - 1).expect("in range")
}

impl Ord for MonomialIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MonomialIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Graded lexicographic comparison with a dimension check.
pub fn grlex_compare(a: &MonomialIndex, b: &MonomialIndex) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::precondition(format!("indices {a} and {b} have different lengths")));
    }
    Ok(a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u32]) -> MonomialIndex {
        MonomialIndex::new(v.to_vec())
    }

    #[test]
    fn examples() {
        assert_eq!(grlex_compare(&idx(&[0, 1]), &idx(&[1, 0])).unwrap(), Ordering::Less);
        assert_eq!(grlex_compare(&idx(&[2, 0]), &idx(&[1, 0])).unwrap(), Ordering::Greater);
        assert!(grlex_compare(&idx(&[1]), &idx(&[1, 0])).is_err());
    }

    #[test]
    fn refines_componentwise_and_ranks_enumerate() {
        let mut all = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    all.push(idx(&[a, b, c]));
                }
            }
        }
        for x in &all {
            for y in &all {
                if x.divides(y) {
                    assert!(x <= y, "{x} <= {y}");
                }
            }
        }
        // ranks of all indices of degree <= 3 are exactly 0..20 in sorted order
        let mut low: Vec<_> = all.iter().filter(|i| i.degree() <= 3).cloned().collect();
        low.sort();
        for (k, i) in low.iter().enumerate() {
            assert_eq!(i.grlex_rank(), BigUint::from(k));
        }
    }
}
