//! Stable presentations `x = sum x_i pi^i` with respect to `pi = w - [u]`, and
//! the seminorms they compute: `H(u, r)` and the type-5 valuations.
//!
//! A presentation is computed for the truncation `x' = sum_{i<N} w^i [x_i]`
//! of the input. Since `H(u, r)(w) = max(r/p, |u|)`, the discarded tail
//! `w^N z` has `H(u, r)` at most `max(r/p, |u|)^N`, and every evaluation
//! carries that bound. Carries lost to the `w^N` truncation in mixed
//! characteristic are multiples of `w^N` as well and fall under the same bound.

use std::sync::Arc;

use num_traits::Signed;

use crate::coeff::{CoeffElem, Field, NormExp};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};
use crate::robba::RobbaElem;
use crate::witt::{lambda_norm, teichmuller, Backend, WittElem};

use super::gamma::GammaValue;
use super::{Radius, Sign};

/// How far [`stable_reduce_with`] folds higher digits into digit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReduceStrategy {
    /// Folds digits in increasing order and stops as soon as the result is stable.
    Minimal,
    /// Folds every digit; in equal characteristic the result is `[x(u)]`. In
    /// mixed characteristic carries refill the higher digits, so it folds all
    /// of them in passes until the result is stable.
    Exhaustive,
}

/// Budget on single-digit folds per reduction in mixed characteristic, per digit.
const FOLD_BUDGET_PER_DIGIT: usize = 8;

/// Validates a center and returns its norm exponent, `None` for `u = 0`.
pub(crate) fn center_exp(u: &CoeffElem, field: &Arc<Field>) -> Result<Option<Q>> {
    if !Field::same(u.field(), field) {
        return Err(Error::ConfigMismatch);
    }
    match u.norm() {
        NormExp::Exact(e) if e < qi(1) => {
            Err(Error::precondition(format!("center must satisfy |u| <= p^-1, got p^-({})", fmt_q(&e))))
        }
        NormExp::Exact(e) => Ok(Some(e)),
        NormExp::Below(_) => Ok(None),
    }
}

/// Stability of `x` read as a polynomial in `w`: digits past `N` are taken to be zero.
fn is_stable_poly(x: &WittElem) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let lead = x.digits()[0].norm();
    let mut undecided = None;
    for (i, d) in x.digits().iter().enumerate().skip(1) {
        let other = d.norm().shift(qi(i as i64));
        match lead.cmp_norm(&other) {
            Ok(std::cmp::Ordering::Greater) => {}
            Ok(_) => return Ok(false),
            Err(e) => {
                if let (NormExp::Below(b), NormExp::Exact(a)) = (lead, other) {
                    if a <= b {
                        return Ok(false);
                    }
                }
                undecided.get_or_insert(e);
            }
        }
    }
    match undecided {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// `x = y + q (w - [u])` with `y` stable, using [`ReduceStrategy::Minimal`].
pub fn stable_reduce(x: &WittElem, u: &CoeffElem) -> Result<(WittElem, WittElem)> {
    stable_reduce_with(x, u, ReduceStrategy::Minimal)
}

/// Folding digit `i` replaces `w^i [y_i]` by `[u^i y_i]`; the difference
/// `(w^i - [u]^i) [y_i] = pi [y_i] sum_{k<i} w^k [u]^{i-1-k}` moves into `q`.
pub fn stable_reduce_with(x: &WittElem, u: &CoeffElem, strategy: ReduceStrategy) -> Result<(WittElem, WittElem)> {
    center_exp(u, x.field())?;
    match x.ring().backend() {
        Backend::EqualChar => Ok(reduce_equal(x, u, strategy)),
        Backend::MixedCharPTypical => reduce_mixed(x, u, strategy),
    }
}

fn reduce_equal(x: &WittElem, u: &CoeffElem, strategy: ReduceStrategy) -> (WittElem, WittElem) {
    let field = x.field().clone();
    let ring = x.ring().clone();
    let n = x.wprec();
    let top = x.digits().iter().map(CoeffElem::tprec).max().expect("nonempty").max(field.default_tprec());
    let mut upow = vec![CoeffElem::one(&field).assume_exact_to(top)];
    for j in 1..n {
        let next = upow[j - 1].mul(u);
        upow.push(next);
    }
    let mut y = x.digits().to_vec();
    let mut q = vec![CoeffElem::zero_with_prec(&field, top); n];
    let mut folded = vec![false; n];
    let mut next = 1;
    loop {
        let done = match strategy {
            ReduceStrategy::Minimal => {
                next >= n
                    || matches!(is_stable_poly(&WittElem::from_digits(&ring, y.clone()).expect("integral")), Ok(true))
            }
            ReduceStrategy::Exhaustive => next >= n,
        };
        if done {
            break;
        }
        let i = next;
        next += 1;
        let c = y[i].clone();
        y[0] = y[0].add(&c.mul(&upow[i]));
        for k in 0..i {
            q[k] = q[k].add(&c.mul(&upow[i - 1 - k]));
        }
        folded[i] = true;
        // folded digits are exactly zero; give them the precision of digit 0
        let p0 = y[0].tprec();
        for (j, d) in y.iter_mut().enumerate() {
            if folded[j] {
                *d = CoeffElem::zero_with_prec(&field, p0.max(top));
            }
        }
    }
    (WittElem::from_digits(&ring, y).expect("integral"), WittElem::from_digits(&ring, q).expect("integral"))
}

fn reduce_mixed(x: &WittElem, u: &CoeffElem, strategy: ReduceStrategy) -> Result<(WittElem, WittElem)> {
    let field = x.field().clone();
    let ring = x.ring().clone();
    let n = x.wprec();
    let mut y = x.clone();
    let mut q = WittElem::zero(&ring).truncate(n);
    let mut folds = 0usize;
    let budget = FOLD_BUDGET_PER_DIGIT * n;
    let fold = |y: &mut WittElem, q: &mut WittElem, i: usize| -> Result<()> {
        let c = y.digits()[i].clone();
        let mut digits = y.digits().to_vec();
        digits[i] = CoeffElem::zero_with_prec(&field, c.tprec());
        let removed = WittElem::from_digits(&ring, digits)?;
        let ui = u.pow(i as u64);
        *y = removed.add(&teichmuller(&ring, &c.mul(&ui))?.truncate(n));
        let mut factor = WittElem::zero(&ring).truncate(n);
        for k in 0..i {
            let term = teichmuller(&ring, &u.pow((i - 1 - k) as u64))?.truncate(n).shift(k);
            factor = factor.add(&term);
        }
        *q = q.add(&factor.teich_scale(&c));
        Ok(())
    };
    loop {
        let nonzero: Vec<usize> = (1..n).filter(|&i| !y.digits()[i].is_zero()).collect();
        if nonzero.is_empty() {
            break;
        }
        // carries keep refilling the higher digits, so both strategies stop
        // once stable; exhaustive folding always completes at least one pass
        if (strategy == ReduceStrategy::Minimal || folds > 0) && matches!(is_stable_poly(&y), Ok(true)) {
            break;
        }
        if folds >= budget {
            return Err(Error::BudgetExceeded(format!("stable reduction of {x} after {folds} folds")));
        }
        match strategy {
            ReduceStrategy::Minimal => fold(&mut y, &mut q, nonzero[0])?,
            ReduceStrategy::Exhaustive => {
                for i in nonzero {
                    if !y.digits()[i].is_zero() {
                        fold(&mut y, &mut q, i)?;
                    }
                }
            }
        }
        folds += 1;
    }
    if !is_stable_poly(&y)? {
        return Err(Error::Internal(format!("reduction of {x} ended unstable at {y}")));
    }
    Ok((y, q))
}

/// A stable presentation `x = sum_{i<D} x_i pi^i + pi^D R` of a truncated
/// Witt vector, `pi = w - [u]`.
#[derive(Clone, Debug)]
pub struct StablePresentation {
    pub center: CoeffElem,
    pub entries: Vec<WittElem>,
    pub remainder: WittElem,
    /// `w`-adic precision `N` of the input.
    pub wprec: usize,
    /// Norm exponent of the center, `None` when `u = 0`.
    pub center_exp: Option<Q>,
}

impl StablePresentation {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// `sum x_i pi^i + pi^D R`.
    pub fn reconstruct(&self) -> Result<WittElem> {
        let ring = self.remainder.ring().clone();
        let pi = WittElem::linear(&ring, &self.center)?;
        let mut acc = self.remainder.clone();
        for entry in self.entries.iter().rev() {
            acc = acc.mul(&pi).add(entry);
        }
        Ok(acc)
    }

    /// Exponent `c` of `H(u, r)(w) = max(r/p, |u|)`; `None` when it vanishes.
    pub(crate) fn varpi_exp(&self, radius: &Radius) -> Option<Q> {
        match (radius.weight(), self.center_exp) {
            (Some(w), Some(c)) => Some(w.min(c)),
            (Some(w), None) => Some(w),
            (None, c) => c,
        }
    }

    /// `H(u, r)` of the presented element.
    pub fn h_norm(&self, radius: &Radius) -> NormExp {
        let mut acc = match self.varpi_exp(radius) {
            Some(c) => NormExp::Below(c * qi(self.wprec as i64)),
            None => NormExp::Below(self.entries[0].min_tprec() * self.entries[0].field().t_exponent()),
        };
        match radius.weight() {
            None => acc.max(&lambda_norm(&self.entries[0])),
            Some(w) => {
                for (i, x) in self.entries.iter().enumerate() {
                    acc = acc.max(&lambda_norm(x).shift(w * qi(i as i64)));
                }
                let rest = lambda_norm(&self.remainder).floor_exp();
                acc.max(&NormExp::Below(w * qi(self.depth() as i64) + rest))
            }
        }
    }

    /// `max_i (r^{+-}/p)^i lambda(x_i)` and the level attaining it.
    pub fn beta5(&self, rho: Q, sign: Sign) -> Result<(GammaValue, usize)> {
        let w = rho + qi(1);
        let s = sign.factor();
        let mut best: Option<(GammaValue, usize)> = None;
        let mut bounds: Vec<(Q, Option<i64>)> = Vec::new();
        for (i, x) in self.entries.iter().enumerate() {
            let k = s * i as i64;
            match lambda_norm(x) {
                NormExp::Exact(e) => {
                    let v = GammaValue::new(e + w * qi(i as i64), k);
                    if let Some((b, _)) = best {
                        if b == v {
                            return Err(Error::Internal(format!("two presentation levels attain {v}")));
                        }
                    }
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, i));
                    }
                }
                NormExp::Below(b) => bounds.push((b + w * qi(i as i64), Some(k))),
            }
        }
        let (best, level) =
            best.ok_or_else(|| Error::indeterminate("every presentation level vanishes at precision"))?;
        if let Some(c) = self.varpi_exp(&Radius::Exp(rho)) {
            bounds.push((c * qi(self.wprec as i64), None));
        }
        bounds.push((w * qi(self.depth() as i64) + lambda_norm(&self.remainder).floor_exp(), None));
        for (b, k) in bounds {
            let dominated = match k {
                Some(k) => GammaValue::new(b, k) < best,
                None => b > best.e,
            };
            if !dominated {
                return Err(Error::indeterminate(format!(
                    "a term bounded by p^-({}) may reach the maximum {best}",
                    fmt_q(&b)
                )));
            }
        }
        Ok((best, level))
    }
}

/// Iterates [`stable_reduce_with`] `depth` times.
pub fn stable_presentation_with(
    x: &WittElem,
    u: &CoeffElem,
    depth: usize,
    strategy: ReduceStrategy,
) -> Result<StablePresentation> {
    let center_exp = center_exp(u, x.field())?;
    if depth == 0 {
        return Err(Error::precondition("presentation depth must be positive"));
    }
    let mut entries = Vec::with_capacity(depth);
    let mut rem = x.clone();
    for level in 0..depth {
        let (y, q) = stable_reduce_with(&rem, u, strategy).map_err(|e| match e {
            Error::Indeterminate(m) => Error::Indeterminate(format!("achieved depth {level}: {m}")),
            Error::BudgetExceeded(m) => Error::BudgetExceeded(format!("achieved depth {level}: {m}")),
            other => other,
        })?;
        entries.push(y);
        rem = q;
    }
    Ok(StablePresentation { center: u.clone(), entries, remainder: rem, wprec: x.wprec(), center_exp })
}

/// Stable presentation to depth `depth` with the minimal reduction strategy.
pub fn stable_presentation(x: &WittElem, u: &CoeffElem, depth: usize) -> Result<StablePresentation> {
    stable_presentation_with(x, u, depth, ReduceStrategy::Minimal)
}

/// `H(u, r)(x)` for `x` in `B`, via `x = w^k [t^a] core`.
pub fn eval_h(u: &CoeffElem, radius: &Radius, x: &RobbaElem) -> Result<NormExp> {
    eval_h_with(u, radius, x, ReduceStrategy::Minimal)
}

pub fn eval_h_with(u: &CoeffElem, radius: &Radius, x: &RobbaElem, strategy: ReduceStrategy) -> Result<NormExp> {
    radius.validate()?;
    prepare(u, x, strategy)?.h_norm(radius)
}

/// `x = w^k [t^a] core` together with a stable presentation of `core`.
#[derive(Clone, Debug)]
pub(crate) struct Prepared {
    pub k: i64,
    /// Norm exponent of `[t^a]`.
    pub unit: Q,
    pub pres: StablePresentation,
    /// Least digit precision of the input, as a norm exponent.
    pub floor: Q,
}

pub(crate) fn prepare(u: &CoeffElem, x: &RobbaElem, strategy: ReduceStrategy) -> Result<Prepared> {
    let field = x.field().clone();
    center_exp(u, &field)?;
    let x = x.trimmed();
    let (k, a, core) = x.normalize();
    let pres = stable_presentation_with(&core, u, core.wprec(), strategy)?;
    let floor = x.digits().iter().map(CoeffElem::tprec).min().expect("nonempty") * field.t_exponent();
    Ok(Prepared { k, unit: a * field.t_exponent(), pres, floor })
}

impl Prepared {
    pub fn h_norm(&self, radius: &Radius) -> Result<NormExp> {
        let inner = self.pres.h_norm(radius);
        match self.pres.varpi_exp(radius) {
            Some(c) => Ok(inner.shift(c * qi(self.k) + self.unit)),
            None => match self.k.signum() {
                0 => Ok(inner.shift(self.unit)),
                1 => Ok(NormExp::Below(self.floor)),
                _ => Err(Error::Divergent("negative power of w at the point u = 0, r = 0".into())),
            },
        }
    }
}

/// Result of a type-5 evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Beta5Value {
    pub value: GammaValue,
    /// Presentation level of the normalized core attaining the maximum.
    pub level: Option<usize>,
    /// `r` is outside the value group, so the point is the rank-1 point `beta_{u,r}`.
    pub coincides_with_rank1: bool,
}

/// `beta_{u, r^{+-}}(x)` with `r = p^{-rho}`.
pub fn eval_beta5(u: &CoeffElem, rho: Q, sign: Sign, x: &RobbaElem) -> Result<Beta5Value> {
    if rho.is_negative() {
        return Err(Error::precondition("type-5 points need rho >= 0"));
    }
    let field = x.field().clone();
    let cu = center_exp(u, &field)?;
    if !field.in_value_group(&rho) {
        return match eval_h(u, &Radius::Exp(rho), x)? {
            NormExp::Exact(e) => {
                Ok(Beta5Value { value: GammaValue::new(e, 0), level: None, coincides_with_rank1: true })
            }
            NormExp::Below(b) => Err(Error::indeterminate(format!("value below p^-({}) at precision", fmt_q(&b)))),
        };
    }
    let x = x.trimmed();
    let (k, a, core) = x.normalize();
    let pres = stable_presentation(&core, u, core.wprec())?;
    let (inner, level) = pres.beta5(rho, sign)?;
    let w = rho + qi(1);
    let level_one = GammaValue::new(w, sign.factor());
    let varpi = match cu {
        Some(c) => GammaValue::new(c, 0).max(level_one),
        None => level_one,
    };
    let varpi_k = if k >= 0 {
        (0..k).fold(GammaValue::one(), |acc, _| acc.mul(&varpi))
    } else {
        let inv = varpi.inv().expect("nonzero");
        (0..-k).fold(GammaValue::one(), |acc, _| acc.mul(&inv))
    };
    let value = inner.mul(&varpi_k).mul(&GammaValue::new(a * field.t_exponent(), 0));
    Ok(Beta5Value { value, level: Some(level), coincides_with_rank1: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::witt::{is_stable, RingConfig};

    fn ring() -> Arc<crate::witt::Ring> {
        RingConfig::default().build().unwrap()
    }

    fn tp(r: &Arc<crate::witt::Ring>, e: Q) -> CoeffElem {
        CoeffElem::t_pow(r.field(), e)
    }

    #[test]
    fn reduce_varpi() {
        let r = ring();
        let t = tp(&r, qi(1));
        let w = WittElem::varpi_pow(&r, 1);
        let (y, qq) = stable_reduce(&w, &t).unwrap();
        assert!(y.approx_eq(&teichmuller(&r, &t).unwrap()));
        assert!(qq.approx_eq(&WittElem::one(&r)));
        let s = teichmuller(&r, &tp(&r, q(3, 2))).unwrap();
        let (y, qq) = stable_reduce(&s, &t).unwrap();
        assert!(y.approx_eq(&s) && qq.is_zero());
    }

    #[test]
    fn presentation_of_pi_squared() {
        let r = ring();
        let t = tp(&r, qi(1));
        let pi = WittElem::linear(&r, &t).unwrap();
        let pres = stable_presentation(&pi.mul(&pi), &t, 6).unwrap();
        assert!(pres.entries[0].is_zero());
        assert!(pres.entries[1].is_zero());
        assert!(pres.entries[2].approx_eq(&WittElem::one(&r)));
        for e in &pres.entries {
            assert!(is_stable(e).unwrap() || e.is_zero());
        }
        assert!(pres.reconstruct().unwrap().approx_eq(&pi.mul(&pi)));
    }

    #[test]
    fn h_examples() {
        let r = ring();
        let t = tp(&r, qi(1));
        let w = RobbaElem::varpi_pow(&r, 1);
        for rho in [qi(0), q(1, 2), qi(3)] {
            assert_eq!(eval_h(&t, &Radius::Exp(rho), &w).unwrap(), NormExp::Exact(qi(1)));
        }
        let pi = RobbaElem::from_witt(&WittElem::linear(&r, &t).unwrap());
        assert!(eval_h(&t, &Radius::Zero, &pi).unwrap().is_below());
        assert_eq!(eval_h(&t, &Radius::Exp(q(1, 2)), &pi).unwrap(), NormExp::Exact(q(3, 2)));
    }

    #[test]
    fn beta5_examples() {
        let r = ring();
        let t = tp(&r, qi(1));
        let pi = RobbaElem::from_witt(&WittElem::linear(&r, &t).unwrap());
        let v = eval_beta5(&t, q(1, 2), Sign::Plus, &pi).unwrap();
        assert_eq!(v.value, GammaValue::new(q(3, 2), 1));
        let s = RobbaElem::teichmuller(&r, &tp(&r, q(5, 4))).unwrap();
        let v = eval_beta5(&t, q(1, 2), Sign::Plus, &s).unwrap();
        assert_eq!(v.value, GammaValue::new(q(5, 4), 0));
        let v = eval_beta5(&t, q(1, 3), Sign::Minus, &pi).unwrap();
        assert!(v.coincides_with_rank1);
        assert_eq!(v.value, GammaValue::new(q(4, 3), 0));
    }

    #[test]
    fn mixed_presentation_reconstructs() {
        let r =
            RingConfig::new(crate::coeff::FieldConfig::new(3, 3, 1).with_tprec(qi(64)), Backend::MixedCharPTypical, 3)
                .build()
                .unwrap();
        let t = CoeffElem::t_pow(r.field(), qi(1));
        let x = WittElem::varpi_pow(&r, 1).add(&teichmuller(&r, &CoeffElem::t_pow(r.field(), qi(2))).unwrap());
        let pres = stable_presentation(&x, &t, 3).unwrap();
        assert!(pres.reconstruct().unwrap().approx_eq(&x));
        let ex = stable_presentation_with(&x, &t, 3, ReduceStrategy::Exhaustive).unwrap();
        for rho in [qi(0), q(1, 3), qi(2)] {
            assert_eq!(pres.h_norm(&Radius::Exp(rho)), ex.h_norm(&Radius::Exp(rho)));
        }
    }
}
