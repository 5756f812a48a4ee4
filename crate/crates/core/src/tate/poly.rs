//! Weighted Tate algebras `A{T_1/rho_1, ..., T_n/rho_n}` with
//! `|T_i| = p^{-rho_i}` and their finite elements.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};

use super::domain::CoeffDomain;
use super::monomial::MonomialIndex;

/// A weight exponent `rho_i`. Irrational weights can be named but not used:
/// the value group of the algebra would have infinite index over that of
/// the coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Rational(Q),
    Irrational(String),
}

#[derive(Clone, Debug)]
pub struct TateAlgebra<D: CoeffDomain> {
    domain: D,
    weights: Vec<Q>,
}

impl<D: CoeffDomain> TateAlgebra<D> {
    pub fn new(domain: D, weights: Vec<Weight>) -> Result<Arc<Self>> {
        let mut ws = Vec::with_capacity(weights.len());
        for (i, w) in weights.into_iter().enumerate() {
            match w {
                Weight::Rational(r) => ws.push(r),
                Weight::Irrational(label) => {
                    return Err(Error::ValueGroup(format!(
                        "weight {} of T_{} is irrational; the value group has infinite index",
                        label,
                        i + 1
                    )))
                }
            }
        }
        if ws.is_empty() {
            return Err(Error::InvalidConfig("a Tate algebra needs at least one variable".into()));
        }
        Ok(Arc::new(TateAlgebra { domain, weights: ws }))
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// `rho . I`, the norm exponent of `T^I`.
    pub fn index_exp(&self, i: &MonomialIndex) -> Q {
        self.weights.iter().zip(i.exps()).map(|(w, &e)| w * qi(e as i64)).sum()
    }

    /// Least `e_i >= 1` with `|T_i^{e_i}|` a norm of a unit.
    pub fn scaling_exponents(&self) -> Vec<u64> {
        self.weights
            .iter()
            .map(|w| (1..=4096u64).find(|&e| self.domain.in_value_group(&(w * qi(e as i64)))).unwrap_or(0))
            .collect()
    }
}

pub struct TatePoly<D: CoeffDomain> {
    alg: Arc<TateAlgebra<D>>,
    terms: BTreeMap<MonomialIndex, D::Elem>,
    /// Norm exponent bound on discarded terms; `None` when exact.
    tail: Option<Q>,
}

impl<D: CoeffDomain> Clone for TatePoly<D> {
    fn clone(&self) -> Self {
        TatePoly { alg: self.alg.clone(), terms: self.terms.clone(), tail: self.tail }
    }
}

impl<D: CoeffDomain> fmt::Debug for TatePoly<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TatePoly({self})")
    }
}

fn min_tail(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl<D: CoeffDomain> TatePoly<D> {
    pub fn zero(alg: &Arc<TateAlgebra<D>>) -> Self {
        TatePoly { alg: alg.clone(), terms: BTreeMap::new(), tail: None }
    }

    pub fn constant(alg: &Arc<TateAlgebra<D>>, c: D::Elem) -> Self {
        Self::monomial(alg, c, MonomialIndex::zero(alg.nvars()))
    }

    pub fn one(alg: &Arc<TateAlgebra<D>>) -> Self {
        Self::constant(alg, alg.domain.one())
    }

    /// `c T^I`.
    pub fn monomial(alg: &Arc<TateAlgebra<D>>, c: D::Elem, i: MonomialIndex) -> Self {
        Self::from_terms(alg, [(i, c)]).expect("index length matches")
    }

    /// `T_k`, zero-based.
    pub fn var(alg: &Arc<TateAlgebra<D>>, k: usize) -> Self {
        Self::monomial(alg, alg.domain.one(), MonomialIndex::unit(alg.nvars(), k))
    }

    pub fn from_terms(
        alg: &Arc<TateAlgebra<D>>,
        terms: impl IntoIterator<Item = (MonomialIndex, D::Elem)>,
    ) -> Result<Self> {
        let mut out = Self::zero(alg);
        for (i, c) in terms {
            if i.nvars() != alg.nvars() {
                return Err(Error::precondition(format!("index {i} has the wrong number of variables")));
            }
            out.add_term(i, c);
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<TateAlgebra<D>> {
        &self.alg
    }

    pub fn domain(&self) -> &D {
        &self.alg.domain
    }

    pub fn terms(&self) -> &BTreeMap<MonomialIndex, D::Elem> {
        &self.terms
    }

    pub fn tail(&self) -> Option<Q> {
        self.tail
    }

    pub fn with_tail(mut self, tail: Option<Q>) -> Self {
        self.tail = min_tail(self.tail, tail);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: &MonomialIndex) -> D::Elem {
        self.terms.get(i).cloned().unwrap_or_else(|| self.alg.domain.zero())
    }

    fn add_term(&mut self, i: MonomialIndex, c: D::Elem) {
        let d = &self.alg.domain;
        let sum = match self.terms.remove(&i) {
            Some(old) => d.add(&old, &c),
            None => c,
        };
        if !d.is_zero(&sum) {
            self.terms.insert(i, sum);
        }
    }

    /// Norm exponent of the term `c T^I`.
    pub fn term_exp(&self, i: &MonomialIndex, c: &D::Elem) -> Option<Q> {
        self.alg.domain.val(c).map(|v| v + self.alg.index_exp(i))
    }

    /// Exponent of the weighted Gauss norm `max_I |x_I| p^{-rho.I}`; `None`
    /// when no term survives.
    pub fn gauss_exp(&self) -> Option<Q> {
        self.terms.iter().filter_map(|(i, c)| self.term_exp(i, c)).min()
    }

    /// `x` minus its constant term.
    pub fn nonconstant_projection(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&MonomialIndex::zero(self.alg.nvars()));
        out
    }

    pub fn constant_term(&self) -> D::Elem {
        self.coefficient(&MonomialIndex::zero(self.alg.nvars()))
    }

    /// The graded-lex maximal index among the terms attaining the Gauss
    /// norm, and its coefficient.
    pub fn leading_data(&self) -> Result<(MonomialIndex, D::Elem)> {
        let top = self.gauss_exp().ok_or_else(|| Error::precondition("leading data of an element that vanishes"))?;
        let (i, c) = self
            .terms
            .iter()
            .rev()
            .find(|(i, c)| self.term_exp(i, c) == Some(top))
            .expect("some term attains the norm");
        Ok((i.clone(), c.clone()))
    }

    fn check_same(&self, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.alg, &other.alg) || self.alg.weights == other.alg.weights);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        out.tail = min_tail(self.tail, other.tail);
        out
    }

    pub fn neg(&self) -> Self {
        let d = &self.alg.domain;
        TatePoly {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(i, c)| (i.clone(), d.neg(c))).collect(),
            tail: self.tail,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `c T^J x`.
    pub fn mul_term(&self, c: &D::Elem, j: &MonomialIndex) -> Self {
        let d = &self.alg.domain;
        let mut out = Self::zero(&self.alg);
        for (i, a) in &self.terms {
            out.add_term(i.add(j), d.mul(a, c));
        }
        out.tail = match (self.tail, d.val(c)) {
            (Some(t), Some(v)) => Some(t + v + self.alg.index_exp(j)),
            _ => None,
        };
        out
    }

    /// `self += c T^J`, in place.
    pub(crate) fn push_term(&mut self, j: MonomialIndex, c: D::Elem) {
        self.add_term(j, c);
    }

    /// `self -= c T^J g` in place, dropping resulting terms of norm exponent
    /// `>= cutoff` into the tail.
    pub(crate) fn sub_mul_term_truncated(&mut self, g: &Self, c: &D::Elem, j: &MonomialIndex, cutoff: Q) {
        let d = self.alg.domain.clone();
        let nc = d.neg(c);
        for (i, a) in &g.terms {
            let k = i.add(j);
            self.add_term(k.clone(), d.mul(a, &nc));
            if let Some(v) = self.terms.get(&k) {
                if self.term_exp(&k, v).is_some_and(|e| e >= cutoff) {
                    self.terms.remove(&k);
                    self.tail = min_tail(self.tail, Some(cutoff));
                }
            }
        }
        if let (Some(t), Some(v)) = (g.tail, d.val(c)) {
            self.tail = min_tail(self.tail, Some(t + v + self.alg.index_exp(j)));
        }
    }

    pub fn scale(&self, c: &D::Elem) -> Self {
        self.mul_term(c, &MonomialIndex::zero(self.alg.nvars()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = Self::zero(&self.alg);
        for (j, c) in &other.terms {
            let part = self.mul_term(c, j);
            for (i, a) in part.terms {
                out.add_term(i, a);
            }
        }
        let tx = match (self.tail, other.gauss_exp()) {
            (Some(t), Some(g)) => Some(t + g),
            (Some(t), None) => other.tail.map(|u| t + u),
            _ => None,
        };
        let ty = match (other.tail, self.gauss_exp()) {
            (Some(t), Some(g)) => Some(t + g),
            (Some(t), None) => self.tail.map(|u| t + u),
            _ => None,
        };
        out.tail = min_tail(tx, ty);
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.alg), |acc, _| acc.mul(self))
    }

    /// Moves every term of norm exponent at least `cutoff` into the tail.
    pub fn truncate(&self, cutoff: Q) -> Self {
        let mut out = self.clone();
        let mut dropped = false;
        out.terms.retain(|i, c| {
            let keep = self.term_exp(i, c).is_some_and(|e| e < cutoff);
            dropped |= !keep;
            keep
        });
        if dropped {
            out.tail = min_tail(out.tail, Some(cutoff));
        }
        out
    }

    /// Whether `self - other` vanishes up to the tails of both sides.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let diff = self.sub(other);
        match diff.tail {
            None => diff.is_zero(),
            Some(t) => diff.terms.iter().all(|(i, c)| diff.term_exp(i, c).is_none_or(|e| e >= t)),
        }
    }

    pub fn format(&self) -> String {
        let d = &self.alg.domain;
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.terms.iter().rev() {
            let mono: Vec<String> = i
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { format!("T{}", k + 1) } else { format!("T{}^{}", k + 1, e) })
                .collect();
            let coeff = d.format(c);
            parts.push(match (mono.is_empty(), coeff.as_str()) {
                (true, _) => format!("({coeff})"),
                (false, "1") => mono.join("*"),
                (false, _) => format!("({coeff})*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        let mut s = parts.join(" + ");
        if let Some(t) = self.tail {
            s.push_str(&format!(" + O(p^-({}))", fmt_q(&t)));
        }
        s
    }
}

impl<D: CoeffDomain> fmt::Display for TatePoly<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}
