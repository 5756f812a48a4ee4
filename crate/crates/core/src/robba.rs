//! Truncated elements of the extended Robba rings `A`, `B` and `B^I`, and the
//! norms `H(0, r)` and `lambda_I`.
//!
//! An element is `sum_{lo <= i < N} w^i [x_i] + O(w^N)` with digits in `L`.
//! Arithmetic multiplies by `w^{-k} [t^{-a}]` to land in `W(O_L)_E`, works
//! there, and multiplies back.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::coeff::{CoeffElem, Field, NormExp};
use crate::error::{Error, Result};
use crate::ffield::Fe;
use crate::rational::{fmt_q, qi, Q};
use crate::witt::{Ring, WittElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RobbaKind {
    /// Nonnegative indices and integral digits.
    A,
    /// Finitely many negative indices or non-integral digits.
    B,
}

/// The closed interval `[s, r] = [p^{-s_exp}, p^{-r_exp}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalExp {
    pub s_exp: Q,
    pub r_exp: Q,
}

impl IntervalExp {
    pub fn new(s_exp: Q, r_exp: Q) -> Result<Self> {
        if r_exp.is_negative() || s_exp < r_exp {
            return Err(Error::precondition(format!(
                "interval needs s_exp >= r_exp >= 0, got [{}, {}]",
                fmt_q(&s_exp),
                fmt_q(&r_exp)
            )));
        }
        Ok(IntervalExp { s_exp, r_exp })
    }
}

#[derive(Clone)]
pub struct RobbaElem {
    ring: Arc<Ring>,
    /// Index of `digits[0]`.
    lo: i64,
    digits: Vec<CoeffElem>,
}

impl PartialEq for RobbaElem {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.lo == other.lo && self.digits == other.digits
    }
}

impl Eq for RobbaElem {}

impl fmt::Debug for RobbaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RobbaElem({self})")
    }
}

impl fmt::Display for RobbaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, d) in self.iter() {
            if d.is_zero() {
                continue;
            }
            let inner = d.format(false);
            parts.push(match i {
                0 => format!("[{inner}]"),
                1 => format!("w*[{inner}]"),
                _ => format!("w^{i}*[{inner}]"),
            });
        }
        parts.push(format!("O(w^{})", self.wprec()));
        write!(f, "{}", parts.join(" + "))
    }
}

impl RobbaElem {
    /// Digits `x_lo, x_{lo+1}, ...`; the element is known modulo `w^{lo + len}`.
    pub fn from_digits(ring: &Arc<Ring>, lo: i64, digits: Vec<CoeffElem>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::precondition("a Robba element needs at least one digit"));
        }
        if digits.iter().any(|d| !Field::same(d.field(), ring.field())) {
            return Err(Error::ConfigMismatch);
        }
        Ok(RobbaElem { ring: ring.clone(), lo, digits })
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        RobbaElem::from_witt(&WittElem::zero(ring))
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        RobbaElem::from_witt(&WittElem::one(ring))
    }

    /// `w^k` for any integer `k`, known modulo `w^{k + wprec}`.
    pub fn varpi_pow(ring: &Arc<Ring>, k: i64) -> Self {
        let mut e = RobbaElem::one(ring);
        e.lo = k;
        e
    }

    /// `[x]` for any `x` in `L`.
    pub fn teichmuller(ring: &Arc<Ring>, x: &CoeffElem) -> Result<Self> {
        if !Field::same(x.field(), ring.field()) {
            return Err(Error::ConfigMismatch);
        }
        let mut e = RobbaElem::one(ring);
        e.digits[0] = x.clone();
        for d in e.digits.iter_mut().skip(1) {
            *d = d.assume_exact_to(x.tprec());
        }
        Ok(e)
    }

    /// The canonical inclusion `W(O_L)_E -> A`.
    pub fn from_witt(x: &WittElem) -> Self {
        RobbaElem { ring: x.ring().clone(), lo: 0, digits: x.digits().to_vec() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Field> {
        self.ring.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// `N`: the element is known modulo `w^N`.
    pub fn wprec(&self) -> i64 {
        self.lo + self.digits.len() as i64
    }

    pub fn digits(&self) -> &[CoeffElem] {
        &self.digits
    }

    pub fn digit(&self, i: i64) -> Option<&CoeffElem> {
        if i < self.lo {
            return None;
        }
        self.digits.get((i - self.lo) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CoeffElem)> {
        self.digits.iter().enumerate().map(move |(j, d)| (self.lo + j as i64, d))
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(CoeffElem::is_zero)
    }

    /// Least index carrying a nonzero digit.
    pub fn i_min(&self) -> Option<i64> {
        self.iter().find(|(_, d)| !d.is_zero()).map(|(i, _)| i)
    }

    pub fn kind(&self) -> RobbaKind {
        let negative_index = self.iter().any(|(i, d)| i < 0 && !d.is_zero());
        if negative_index || self.digits.iter().any(|d| !d.is_integral()) {
            RobbaKind::B
        } else {
            RobbaKind::A
        }
    }

    /// Exponent bound `min(0, least stored t-exponent)` on every digit's valuation.
    pub fn digit_bound(&self) -> Q {
        self.digits.iter().filter_map(CoeffElem::val).fold(qi(0), |a, b| a.min(b))
    }

    /// Removes zero digits below the first nonzero one, keeping `N`.
    pub fn trimmed(&self) -> Self {
        let skip = self.digits.iter().take(self.digits.len() - 1).take_while(|d| d.is_zero()).count();
        RobbaElem { ring: self.ring.clone(), lo: self.lo + skip as i64, digits: self.digits[skip..].to_vec() }
    }

    /// Writes `self = w^k [t^a] core` with `core` in `W(O_L)_E`, `k = lo`
    /// and `a = digit_bound`. Returns `(k, a, core)`.
    pub fn normalize(&self) -> (i64, Q, WittElem) {
        self.normalize_with(self.lo, self.digit_bound())
    }

    /// As [`RobbaElem::normalize`] with prescribed `k <= lo` and `a <= digit_bound`.
    pub fn normalize_with(&self, k: i64, a: Q) -> (i64, Q, WittElem) {
        debug_assert!(k <= self.lo && a <= self.digit_bound());
        let field = self.field();
        let pad_prec = self.digits.iter().map(CoeffElem::tprec).min().expect("nonempty").max(field.default_tprec());
        let mut digits: Vec<CoeffElem> = (k..self.lo).map(|_| CoeffElem::zero_with_prec(field, pad_prec - a)).collect();
        digits.extend(self.digits.iter().map(|d| d.mul_monomial(Fe::ONE, -a)));
        let core = WittElem::from_digits(&self.ring, digits).expect("normalized digits are integral");
        (k, a, core)
    }

    /// Inverse of [`RobbaElem::normalize`].
    pub fn denormalize(k: i64, a: Q, core: &WittElem) -> Self {
        RobbaElem {
            ring: core.ring().clone(),
            lo: k,
            digits: core.digits().iter().map(|d| d.mul_monomial(Fe::ONE, a)).collect(),
        }
    }

    fn check(&self, other: &RobbaElem) -> Result<()> {
        if Ring::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    pub fn add(&self, other: &RobbaElem) -> RobbaElem {
        assert!(Ring::same(&self.ring, &other.ring), "config mismatch");
        let k = self.lo.min(other.lo);
        let a = self.digit_bound().min(other.digit_bound());
        let (_, _, x) = self.normalize_with(k, a);
        let (_, _, y) = other.normalize_with(k, a);
        RobbaElem::denormalize(k, a, &x.add(&y))
    }

    pub fn neg(&self) -> RobbaElem {
        let (k, a, x) = self.normalize();
        RobbaElem::denormalize(k, a, &x.neg())
    }

    pub fn sub(&self, other: &RobbaElem) -> RobbaElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RobbaElem) -> RobbaElem {
        assert!(Ring::same(&self.ring, &other.ring), "config mismatch");
        let (kx, ax, x) = self.normalize();
        let (ky, ay, y) = other.normalize();
        RobbaElem::denormalize(kx + ky, ax + ay, &x.mul(&y))
    }

    pub fn pow(&self, e: u64) -> RobbaElem {
        let (k, a, x) = self.normalize();
        RobbaElem::denormalize(k * e as i64, a * qi(e as i64), &x.pow(e))
    }

    /// `w^k self`.
    pub fn shift(&self, k: i64) -> RobbaElem {
        RobbaElem { ring: self.ring.clone(), lo: self.lo + k, digits: self.digits.clone() }
    }

    /// `[c] self`.
    pub fn teich_scale(&self, c: &CoeffElem) -> RobbaElem {
        RobbaElem { ring: self.ring.clone(), lo: self.lo, digits: self.digits.iter().map(|d| d.mul(c)).collect() }
    }

    /// The element known only modulo `w^n`; `n` above the current precision changes nothing.
    pub fn truncate(&self, n: i64) -> RobbaElem {
        if n >= self.wprec() {
            return self.clone();
        }
        if n <= self.lo {
            let prec = self.digits.iter().map(CoeffElem::tprec).min().expect("nonempty");
            return RobbaElem {
                ring: self.ring.clone(),
                lo: n - 1,
                digits: vec![CoeffElem::zero_with_prec(self.field(), prec)],
            };
        }
        let keep = (n - self.lo) as usize;
        RobbaElem { ring: self.ring.clone(), lo: self.lo, digits: self.digits[..keep].to_vec() }
    }

    /// The element as a Witt vector, when it lies in `W(O_L)_E`.
    pub fn to_witt(&self) -> Result<WittElem> {
        if self.kind() != RobbaKind::A {
            return Err(Error::precondition(format!("{self} is not in W(O_L)_E")));
        }
        let (_, _, core) = self.normalize_with(0.min(self.lo), qi(0));
        Ok(core)
    }

    pub fn approx_eq(&self, other: &RobbaElem) -> bool {
        Ring::same(&self.ring, &other.ring) && self.sub(other).is_zero()
    }
}

pub fn robba_from_witt(x: &WittElem) -> RobbaElem {
    RobbaElem::from_witt(x)
}

pub fn robba_add(x: &RobbaElem, y: &RobbaElem) -> Result<RobbaElem> {
    x.check(y)?;
    Ok(x.add(y))
}

pub fn robba_mul(x: &RobbaElem, y: &RobbaElem) -> Result<RobbaElem> {
    x.check(y)?;
    Ok(x.mul(y))
}

/// `H(0, r)` with `r = p^{-rho}`: exponent `min_i (i (rho + 1) + e(x_i))`.
///
/// Values of `rho <= -1` make the weights `(r/p)^i` grow without bound and
/// are rejected; `-1 < rho < 0` is accepted.
pub fn h0r_norm(x: &RobbaElem, rho: Q) -> Result<NormExp> {
    let w = rho + qi(1);
    if !w.is_positive() {
        return Err(Error::Divergent(format!("r/p >= 1 at rho = {}", fmt_q(&rho))));
    }
    let tail = NormExp::Below(w * qi(x.wprec()) + x.digit_bound() * x.field().t_exponent());
    Ok(x.iter().fold(tail, |acc, (i, d)| acc.max(&d.norm().shift(w * qi(i)))))
}

/// `lambda_I = max(H(0, s), H(0, r))`.
pub fn lambda_i_norm(x: &RobbaElem, interval: &IntervalExp) -> Result<NormExp> {
    Ok(h0r_norm(x, interval.s_exp)?.max(&h0r_norm(x, interval.r_exp)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::witt::RingConfig;

    fn ring() -> Arc<Ring> {
        RingConfig::default().build().unwrap()
    }

    fn tp(r: &Arc<Ring>, e: Q) -> CoeffElem {
        CoeffElem::t_pow(r.field(), e)
    }

    #[test]
    fn inverse_units() {
        let r = ring();
        let w = RobbaElem::varpi_pow(&r, 1);
        let winv = RobbaElem::varpi_pow(&r, -1);
        assert!(w.mul(&winv).approx_eq(&RobbaElem::one(&r)));
        let a = RobbaElem::teichmuller(&r, &tp(&r, qi(-1))).unwrap();
        let b = RobbaElem::teichmuller(&r, &tp(&r, qi(1))).unwrap();
        assert!(a.mul(&b).approx_eq(&RobbaElem::one(&r)));
        assert_eq!(a.kind(), RobbaKind::B);
        assert_eq!(b.kind(), RobbaKind::A);
    }

    #[test]
    fn h0r_examples() {
        let r = ring();
        let w = RobbaElem::varpi_pow(&r, 1);
        assert_eq!(h0r_norm(&w, q(1, 2)).unwrap(), NormExp::Exact(q(3, 2)));
        let tt = RobbaElem::teichmuller(&r, &tp(&r, q(5, 2))).unwrap();
        assert_eq!(h0r_norm(&tt, qi(3)).unwrap(), NormExp::Exact(q(5, 2)));
        let x = RobbaElem::teichmuller(&r, &tp(&r, qi(3))).unwrap().shift(-1);
        assert_eq!(h0r_norm(&x, qi(1)).unwrap(), NormExp::Exact(qi(1)));
        assert!(matches!(h0r_norm(&x, qi(-1)), Err(Error::Divergent(_))));
    }

    #[test]
    fn lambda_i_examples() {
        let r = ring();
        let w = RobbaElem::varpi_pow(&r, 1);
        let i = IntervalExp::new(qi(2), qi(1)).unwrap();
        assert_eq!(lambda_i_norm(&w, &i).unwrap(), NormExp::Exact(qi(2)));
        let tt = RobbaElem::teichmuller(&r, &tp(&r, qi(1))).unwrap();
        assert_eq!(lambda_i_norm(&tt, &i).unwrap(), NormExp::Exact(qi(1)));
        assert!(IntervalExp::new(qi(1), qi(2)).is_err());
    }

    #[test]
    fn from_witt_agrees_with_lambda() {
        let r = ring();
        let x = WittElem::varpi_pow(&r, 2).add(&crate::witt::teichmuller(&r, &tp(&r, qi(3))).unwrap());
        let rx = RobbaElem::from_witt(&x);
        assert_eq!(h0r_norm(&rx, qi(0)).unwrap(), crate::witt::lambda_norm(&x));
        assert!(rx.to_witt().unwrap().approx_eq(&x));
    }

    #[test]
    fn add_with_negative_digits() {
        let r = ring();
        let a = RobbaElem::teichmuller(&r, &tp(&r, qi(-2))).unwrap().shift(-1);
        let b = RobbaElem::one(&r);
        let s = a.add(&b);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.digit(-1).unwrap().val(), Some(qi(-2)));
        assert_eq!(s.digit(0).unwrap().val(), Some(qi(0)));
        assert!(s.sub(&a).approx_eq(&b));
    }
}
