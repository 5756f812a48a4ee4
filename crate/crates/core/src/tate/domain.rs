//! Coefficient domains for weighted Tate algebras: a nonarchimedean field
//! with a multiplicative norm `|x| = p^{-v(x)}`, whose valuation ring is
//! Euclidean with degree `v`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::coeff::{CoeffElem, Field};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};

pub trait CoeffDomain: Clone + fmt::Debug {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn p(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `x / y` for `y != 0`.
    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    /// Exponent `v` with `|x| = p^{-v}`, `None` for zero.
    fn val(&self, x: &Self::Elem) -> Option<Q>;
    /// Whether `p^{-e}` is the norm of a unit.
    fn in_value_group(&self, e: &Q) -> bool;
    /// A unit of norm `p^{-e}`.
    fn unit_of_norm(&self, e: &Q) -> Result<Self::Elem> {
        if !self.in_value_group(e) {
            return Err(Error::NormScalingUnavailable(format!("p^-({}) is not a norm of a unit", fmt_q(e))));
        }
        Ok(self.unit_of_norm_unchecked(e))
    }
    fn unit_of_norm_unchecked(&self, e: &Q) -> Self::Elem;
    /// Euclidean degree on the valuation ring; `None` off it or at zero.
    fn degree(&self, x: &Self::Elem) -> Option<Q> {
        self.val(x).filter(|v| !v.is_negative())
    }
    /// A topologically nilpotent unit.
    fn varpi(&self) -> Self::Elem;
    /// Exponent beyond which coefficients are not resolved.
    fn precision_exp(&self) -> Q;
    fn format(&self, x: &Self::Elem) -> String;
    /// A random element of the valuation ring, small enough to keep
    /// arithmetic exact at the working precision.
    fn random_integral<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }
}

/// Truncated `F_{q^m}((t))` (perfected), the equal characteristic model.
#[derive(Clone, Debug)]
pub struct LaurentDomain {
    field: Arc<Field>,
}

impl LaurentDomain {
    pub fn new(field: Arc<Field>) -> Self {
        LaurentDomain { field }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn t_pow(&self, e: Q) -> CoeffElem {
        CoeffElem::t_pow(&self.field, e)
    }
}

impl PartialEq for LaurentDomain {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field)
    }
}

impl CoeffDomain for LaurentDomain {
    type Elem = CoeffElem;

    fn p(&self) -> u32 {
        self.field.p()
    }
    fn zero(&self) -> CoeffElem {
        CoeffElem::zero(&self.field)
    }
    fn one(&self) -> CoeffElem {
        CoeffElem::one(&self.field)
    }
    fn is_zero(&self, x: &CoeffElem) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &CoeffElem, y: &CoeffElem) -> CoeffElem {
        x.add(y)
    }
    fn neg(&self, x: &CoeffElem) -> CoeffElem {
        x.neg()
    }
    fn mul(&self, x: &CoeffElem, y: &CoeffElem) -> CoeffElem {
        x.mul(y)
    }
    fn div(&self, x: &CoeffElem, y: &CoeffElem) -> Result<CoeffElem> {
        x.div(y)
    }
    fn val(&self, x: &CoeffElem) -> Option<Q> {
        x.val().map(|v| v * self.field.t_exponent())
    }
    fn in_value_group(&self, e: &Q) -> bool {
        self.field.in_value_group(e)
    }
    fn unit_of_norm_unchecked(&self, e: &Q) -> CoeffElem {
        self.t_pow(e / self.field.t_exponent())
    }
    fn varpi(&self) -> CoeffElem {
        self.t_pow(qi(1))
    }
    fn precision_exp(&self) -> Q {
        self.field.default_tprec() * self.field.t_exponent()
    }
    fn format(&self, x: &CoeffElem) -> String {
        x.format(false)
    }
    fn random_integral<R: Rng + ?Sized>(&self, rng: &mut R) -> CoeffElem {
        let ff = self.field.ff();
        let p = self.field.p() as i64;
        let terms: Vec<(Q, crate::ffield::Fe)> = (0..rng.gen_range(0..4))
            .map(|_| {
                let c = crate::ffield::Fe(rng.gen_range(0..ff.size()));
                (Q::new(rng.gen_range(0..3 * p), p), c)
            })
            .collect();
        CoeffElem::from_terms(&self.field, terms, self.field.default_tprec())
    }
}

/// Exact rationals with the `p`-adic norm, standing in for truncated `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicRationals {
    p: u32,
    /// Exponent beyond which terms are dropped by truncating operations.
    cutoff: i64,
}

impl PadicRationals {
    pub fn new(p: u32, cutoff: i64) -> Result<Self> {
        if !crate::ffield::is_prime(p as u64) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        Ok(PadicRationals { p, cutoff })
    }

    pub fn int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    pub fn ratio(&self, n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn vp_int(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.clone();
        let mut v = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            v += 1;
        }
        v
    }
}

impl CoeffDomain for PadicRationals {
    type Elem = BigRational;

    fn p(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn div(&self, x: &BigRational, y: &BigRational) -> Result<BigRational> {
        if y.is_zero() {
            return Err(Error::precondition("division by zero"));
        }
        Ok(x / y)
    }
    fn val(&self, x: &BigRational) -> Option<Q> {
        if x.is_zero() {
            return None;
        }
        Some(qi(self.vp_int(x.numer()) - self.vp_int(x.denom())))
    }
    fn in_value_group(&self, e: &Q) -> bool {
        e.is_integer()
    }
    fn unit_of_norm_unchecked(&self, e: &Q) -> BigRational {
        let k = e.to_integer();
        let p = BigRational::from_integer(BigInt::from(self.p));
        if k >= 0 {
            num_traits::pow(p, k as usize)
        } else {
            num_traits::pow(p.recip(), (-k) as usize)
        }
    }
    fn varpi(&self) -> BigRational {
        self.int(self.p as i64)
    }
    fn precision_exp(&self) -> Q {
        qi(self.cutoff)
    }
    fn random_integral<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let k = rng.gen_range(0..3u32);
        let n = rng.gen_range(-8i64..=8) * (self.p as i64).pow(k);
        let d = loop {
            let d = rng.gen_range(1i64..=9);
            if d % self.p as i64 != 0 {
                break d;
            }
        };
        self.ratio(n, d)
    }
    fn format(&self, x: &BigRational) -> String {
        if x.denom().is_one() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldConfig;
    use crate::rational::q;

    #[test]
    fn padic_valuation_and_units() {
        let d = PadicRationals::new(3, 64).unwrap();
        assert_eq!(d.val(&d.ratio(18, 5)), Some(qi(2)));
        assert_eq!(d.val(&d.ratio(5, 27)), Some(qi(-3)));
        assert_eq!(d.val(&d.unit_of_norm(&qi(-2)).unwrap()), Some(qi(-2)));
        assert!(matches!(d.unit_of_norm(&q(1, 2)), Err(Error::NormScalingUnavailable(_))));
        assert_eq!(d.degree(&d.ratio(1, 3)), None);
    }

    #[test]
    fn laurent_units() {
        let f = FieldConfig::new(2, 2, 1).build().unwrap();
        let d = LaurentDomain::new(f);
        let u = d.unit_of_norm(&q(3, 4)).unwrap();
        assert_eq!(d.val(&u), Some(q(3, 4)));
        assert!(d.unit_of_norm(&q(1, 3)).is_err());
    }
}
