//! The coefficient field `L`: truncated Hahn-style series over `F_{q^m}`
//! with exponents in `Z[1/p]`, and its multiplicative norm `|t| = p^{-t_exponent}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ffield::{default_modulus, Fe, FiniteField};
use crate::rational::{fmt_q, has_p_power_denominator, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub p: u32,
    pub q: u32,
    /// Extension degree of the constant field over `F_q`.
    pub m: u32,
    /// Monic irreducible polynomial over `F_p` of degree `log_p(q) * m`,
    /// low degree first. `None` selects the first irreducible polynomial.
    pub modulus: Option<Vec<u32>>,
    pub t_exponent: Q,
    pub default_tprec: Q,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { p: 2, q: 2, m: 1, modulus: None, t_exponent: qi(1), default_tprec: qi(16) }
    }
}

impl FieldConfig {
    pub fn new(p: u32, q: u32, m: u32) -> Self {
        FieldConfig { p, q, m, ..FieldConfig::default() }
    }

    pub fn with_tprec(mut self, tprec: Q) -> Self {
        self.default_tprec = tprec;
        self
    }

    pub fn build(self) -> Result<Arc<Field>> {
        Field::new(self).map(Arc::new)
    }
}

/// A validated [`FieldConfig`] together with its constant-field tables.
#[derive(Debug)]
pub struct Field {
    config: FieldConfig,
    ff: FiniteField,
    /// `q = p^a`.
    a: u32,
}

impl Field {
    pub fn new(config: FieldConfig) -> Result<Self> {
        if !crate::ffield::is_prime(config.p as u64) {
            return Err(Error::InvalidConfig(format!("p = {} is not prime", config.p)));
        }
        let mut a = 0u32;
        let mut qq = config.q;
        while qq > 1 && qq.is_multiple_of(config.p) {
            qq /= config.p;
            a += 1;
        }
        if qq != 1 || a == 0 {
            return Err(Error::InvalidConfig(format!("q = {} is not a power of p = {}", config.q, config.p)));
        }
        if config.m == 0 {
            return Err(Error::InvalidConfig("m must be positive".into()));
        }
        if !config.t_exponent.is_positive() {
            return Err(Error::InvalidConfig("t_exponent must be positive".into()));
        }
        if !config.default_tprec.is_positive() {
            return Err(Error::InvalidConfig("default_tprec must be positive".into()));
        }
        let degree = (a * config.m) as usize;
        let modulus = config.modulus.clone().unwrap_or_else(|| default_modulus(config.p, degree));
        if modulus.len() != degree + 1 {
            return Err(Error::InvalidConfig(format!(
                "modulus must have degree {degree} = log_p(q) * m, got {}",
                modulus.len().saturating_sub(1)
            )));
        }
        let ff = FiniteField::new(config.p, modulus.clone())?;
        Ok(Field { config: FieldConfig { modulus: Some(modulus), ..config }, ff, a })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn p(&self) -> u32 {
        self.config.p
    }

    pub fn q(&self) -> u32 {
        self.config.q
    }

    /// `log_p(q)`.
    pub fn q_log(&self) -> u32 {
        self.a
    }

    pub fn t_exponent(&self) -> Q {
        self.config.t_exponent
    }

    pub fn default_tprec(&self) -> Q {
        self.config.default_tprec
    }

    pub fn ff(&self) -> &FiniteField {
        &self.ff
    }

    pub fn same(a: &Arc<Field>, b: &Arc<Field>) -> bool {
        Arc::ptr_eq(a, b) || a.config == b.config
    }

    /// True when `e` (a norm exponent) lies in the value group `t_exponent * Z[1/p]`.
    pub fn in_value_group(&self, e: &Q) -> bool {
        crate::rational::in_scaled_p_group(e, &self.config.t_exponent, self.config.p)
    }
}

/// Norm `p^{-e}` of an element, or an upper bound when the element vanishes
/// at working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormExp {
    Exact(Q),
    /// Norm at most `p^{-B}`, possibly zero.
    Below(Q),
}

impl NormExp {
    pub fn exact(&self) -> Option<Q> {
        match self {
            NormExp::Exact(e) => Some(*e),
            NormExp::Below(_) => None,
        }
    }

    pub fn is_below(&self) -> bool {
        matches!(self, NormExp::Below(_))
    }

    /// Lower bound on the exponent.
    pub fn floor_exp(&self) -> Q {
        match self {
            NormExp::Exact(e) | NormExp::Below(e) => *e,
        }
    }

    /// Norm of a product.
    pub fn mul(&self, other: &NormExp) -> NormExp {
        match (self, other) {
            (NormExp::Exact(a), NormExp::Exact(b)) => NormExp::Exact(a + b),
            (NormExp::Exact(a), NormExp::Below(b))
            | (NormExp::Below(a), NormExp::Exact(b))
            | (NormExp::Below(a), NormExp::Below(b)) => NormExp::Below(a + b),
        }
    }

    pub fn shift(&self, by: Q) -> NormExp {
        match self {
            NormExp::Exact(a) => NormExp::Exact(a + by),
            NormExp::Below(a) => NormExp::Below(a + by),
        }
    }

    /// Maximum of two norms; sound when undecidable (falls back to a bound).
    pub fn max(&self, other: &NormExp) -> NormExp {
        match (self, other) {
            (NormExp::Exact(a), NormExp::Exact(b)) => NormExp::Exact(*a.min(b)),
            (NormExp::Exact(a), NormExp::Below(b)) | (NormExp::Below(b), NormExp::Exact(a)) => {
                if a < b {
                    NormExp::Exact(*a)
                } else {
                    NormExp::Below(*b)
                }
            }
            (NormExp::Below(a), NormExp::Below(b)) => NormExp::Below(*a.min(b)),
        }
    }

    /// Compares norms (not exponents): `Greater` means `self` is the larger norm.
    pub fn cmp_norm(&self, other: &NormExp) -> Result<Ordering> {
        match (self, other) {
            (NormExp::Exact(a), NormExp::Exact(b)) => Ok(b.cmp(a)),
            (NormExp::Exact(a), NormExp::Below(b)) => {
                if a < b {
                    Ok(Ordering::Greater)
                } else {
                    Err(Error::indeterminate(format!("norm p^-{} vs O(p^-{})", fmt_q(a), fmt_q(b))))
                }
            }
            (NormExp::Below(a), NormExp::Exact(b)) => {
                if b < a {
                    Ok(Ordering::Less)
                } else {
                    Err(Error::indeterminate(format!("O(p^-{}) vs norm p^-{}", fmt_q(a), fmt_q(b))))
                }
            }
            (NormExp::Below(a), NormExp::Below(b)) => {
                Err(Error::indeterminate(format!("O(p^-{}) vs O(p^-{})", fmt_q(a), fmt_q(b))))
            }
        }
    }

    /// `self <= other` as norms, deciding the cases a `Below` bound permits.
    pub fn le_norm(&self, other: &NormExp) -> Result<bool> {
        match (self, other) {
            (NormExp::Below(a), NormExp::Exact(b)) if a >= b => Ok(true),
            _ => Ok(self.cmp_norm(other)? != Ordering::Greater),
        }
    }
}

impl fmt::Display for NormExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExp::Exact(e) => write!(f, "p^-({})", fmt_q(e)),
            NormExp::Below(b) => write!(f, "O(p^-({}))", fmt_q(b)),
        }
    }
}

/// Element of `L` known modulo `t^tprec`.
#[derive(Clone)]
pub struct CoeffElem {
    field: Arc<Field>,
    terms: BTreeMap<Q, Fe>,
    tprec: Q,
}

impl PartialEq for CoeffElem {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field) && self.terms == other.terms && self.tprec == other.tprec
    }
}

impl Eq for CoeffElem {}

impl fmt::Debug for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(true))
    }
}

impl CoeffElem {
    pub fn zero(field: &Arc<Field>) -> Self {
        Self::zero_with_prec(field, field.default_tprec())
    }

    pub fn zero_with_prec(field: &Arc<Field>, tprec: Q) -> Self {
        CoeffElem { field: field.clone(), terms: BTreeMap::new(), tprec }
    }

    pub fn one(field: &Arc<Field>) -> Self {
        Self::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Arc<Field>, c: Fe) -> Self {
        Self::from_terms(field, [(qi(0), c)], field.default_tprec())
    }

    /// `t^e` at the default precision.
    pub fn t_pow(field: &Arc<Field>, e: Q) -> Self {
        Self::monomial(field, Fe::ONE, e)
    }

    pub fn monomial(field: &Arc<Field>, c: Fe, e: Q) -> Self {
        Self::from_terms(field, [(e, c)], field.default_tprec())
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    ///
    /// # Panics
    /// If an exponent lacks a `p`-power denominator.
    pub fn from_terms(field: &Arc<Field>, terms: impl IntoIterator<Item = (Q, Fe)>, tprec: Q) -> Self {
        let mut map: BTreeMap<Q, Fe> = BTreeMap::new();
        for (e, c) in terms {
            assert!(has_p_power_denominator(&e, field.p()), "exponent {e} must have a p-power denominator");
            if e >= tprec || c.is_zero() {
                continue;
            }
            let entry = map.entry(e).or_insert(Fe::ZERO);
            *entry = field.ff().add(*entry, c);
        }
        map.retain(|_, c| !c.is_zero());
        CoeffElem { field: field.clone(), terms: map, tprec }
    }

    /// Checked variant of [`CoeffElem::from_terms`].
    pub fn try_from_terms(field: &Arc<Field>, terms: Vec<(Q, Fe)>, tprec: Q) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| !has_p_power_denominator(e, field.p())) {
            return Err(Error::precondition(format!("exponent {} does not have a p-power denominator", fmt_q(e))));
        }
        Ok(Self::from_terms(field, terms, tprec))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Q, Fe> {
        &self.terms
    }

    pub fn tprec(&self) -> Q {
        self.tprec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least stored exponent.
    pub fn val(&self) -> Option<Q> {
        self.terms.keys().next().copied()
    }

    /// Least stored exponent, or the precision when nothing is stored.
    pub fn val_bound(&self) -> Q {
        self.val().unwrap_or(self.tprec)
    }

    pub fn leading(&self) -> Option<(Q, Fe)> {
        self.terms.iter().next().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient(&self, e: &Q) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    /// No negative exponents among the stored terms.
    pub fn is_integral(&self) -> bool {
        self.val().is_none_or(|v| !v.is_negative())
    }

    pub fn same_field(&self, other: &CoeffElem) -> bool {
        Field::same(&self.field, &other.field)
    }

    pub fn with_tprec(&self, tprec: Q) -> Self {
        let tprec = tprec.min(self.tprec);
        let terms = self.terms.iter().filter(|(e, _)| **e < tprec).map(|(e, c)| (*e, *c)).collect();
        CoeffElem { field: self.field.clone(), terms, tprec }
    }

    /// Raises the declared precision, treating the element as exact up to `tprec`.
    pub fn assume_exact_to(&self, tprec: Q) -> Self {
        CoeffElem { field: self.field.clone(), terms: self.terms.clone(), tprec: tprec.max(self.tprec) }
    }

    pub fn norm(&self) -> NormExp {
        let s = self.field.t_exponent();
        match self.val() {
            Some(v) => NormExp::Exact(v * s),
            None => NormExp::Below(self.tprec * s),
        }
    }

    pub fn add(&self, other: &CoeffElem) -> CoeffElem {
        assert!(self.same_field(other), "config mismatch");
        let tprec = self.tprec.min(other.tprec);
        let ff = self.field.ff();
        let mut terms: BTreeMap<Q, Fe> = self.terms.range(..tprec).map(|(e, c)| (*e, *c)).collect();
        for (e, c) in other.terms.range(..tprec) {
            let entry = terms.entry(*e).or_insert(Fe::ZERO);
            *entry = ff.add(*entry, *c);
        }
        terms.retain(|_, c| !c.is_zero());
        CoeffElem { field: self.field.clone(), terms, tprec }
    }

    pub fn neg(&self) -> CoeffElem {
        let ff = self.field.ff();
        CoeffElem {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, ff.neg(*c))).collect(),
            tprec: self.tprec,
        }
    }

    pub fn sub(&self, other: &CoeffElem) -> CoeffElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> CoeffElem {
        let ff = self.field.ff();
        let mut terms: BTreeMap<Q, Fe> = self.terms.iter().map(|(e, x)| (*e, ff.mul(*x, c))).collect();
        terms.retain(|_, c| !c.is_zero());
        CoeffElem { field: self.field.clone(), terms, tprec: self.tprec }
    }

    /// Multiplication by the monomial `c t^e`; exact, shifts precision by `e`.
    pub fn mul_monomial(&self, c: Fe, e: Q) -> CoeffElem {
        let ff = self.field.ff();
        if c.is_zero() {
            return CoeffElem::zero_with_prec(&self.field, self.tprec + e);
        }
        CoeffElem {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(x, a)| (x + e, ff.mul(*a, c))).collect(),
            tprec: self.tprec + e,
        }
    }

    pub fn mul(&self, other: &CoeffElem) -> CoeffElem {
        assert!(self.same_field(other), "config mismatch");
        let tprec = (self.tprec + other.val_bound()).min(other.tprec + self.val_bound());
        let ff = self.field.ff();
        let mut terms: BTreeMap<Q, Fe> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= tprec {
                    break;
                }
                let entry = terms.entry(e).or_insert(Fe::ZERO);
                *entry = ff.add(*entry, ff.mul(*ca, *cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        CoeffElem { field: self.field.clone(), terms, tprec }
    }

    /// `x^(p^k)`: exact in characteristic `p`.
    pub fn frobenius_p(&self, k: u32) -> CoeffElem {
        let ff = self.field.ff();
        let scale = qi((self.field.p() as i64).pow(k));
        let pk = (self.field.p() as u64).pow(k);
        CoeffElem {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e * scale, ff.pow(*c, pk))).collect(),
            tprec: self.tprec * scale,
        }
    }

    /// `x^(1/p^k)`: exponents divided by `p^k`, coefficients through the inverse Frobenius.
    pub fn p_power_root(&self, k: u32) -> CoeffElem {
        let ff = self.field.ff();
        let scale = qi((self.field.p() as i64).pow(k));
        CoeffElem {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e / scale, ff.p_power_root(*c, k))).collect(),
            tprec: self.tprec / scale,
        }
    }

    pub fn qth_power(&self) -> CoeffElem {
        self.frobenius_p(self.field.q_log())
    }

    pub fn qth_root(&self) -> CoeffElem {
        self.p_power_root(self.field.q_log())
    }

    pub fn pow(&self, n: u64) -> CoeffElem {
        let p = self.field.p() as u64;
        let mut result: Option<CoeffElem> = None;
        let mut rest = n;
        let mut k = 0u32;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let base = self.frobenius_p(k);
                for _ in 0..digit {
                    result = Some(match result {
                        None => base.clone(),
                        Some(r) => r.mul(&base),
                    });
                }
            }
            rest /= p;
            k += 1;
        }
        result.unwrap_or_else(|| CoeffElem::one(&self.field))
    }

    pub fn inv(&self) -> Result<CoeffElem> {
        let (a, c) =
            self.leading().ok_or_else(|| Error::indeterminate(format!("cannot invert O(t^{})", fmt_q(&self.tprec))))?;
        let ff = self.field.ff();
        let c_inv = ff.inv(c).expect("leading coefficient is nonzero");
        let rel = self.tprec - a;
        // x = c t^a (1 + z), v(z) > 0
        let normalized = self.mul_monomial(c_inv, -a);
        let z = normalized.sub(&CoeffElem::one(&self.field).assume_exact_to(rel)).with_tprec(rel);
        let minus_z = z.neg();
        let mut sum = CoeffElem::one(&self.field).assume_exact_to(rel).with_tprec(rel);
        let mut power = sum.clone();
        while !power.is_zero() {
            power = power.mul(&minus_z).with_tprec(rel);
            sum = sum.add(&power);
        }
        let sum = sum.with_tprec(rel);
        Ok(sum.mul_monomial(c_inv, -a))
    }

    pub fn div(&self, other: &CoeffElem) -> Result<CoeffElem> {
        Ok(self.mul(&other.inv()?))
    }

    /// Difference vanishes at the common precision.
    pub fn approx_eq(&self, other: &CoeffElem) -> bool {
        self.same_field(other) && self.sub(other).is_zero()
    }

    pub fn format(&self, with_prec: bool) -> String {
        let ff = self.field.ff();
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let mono = if e.is_zero() {
                None
            } else if *e == qi(1) {
                Some("t".to_string())
            } else if e.denom() == &1 && e.is_positive() {
                Some(format!("t^{}", e.numer()))
            } else {
                Some(format!("t^({})", fmt_q(e)))
            };
            let coeff = ff.format(*c);
            parts.push(match mono {
                None => coeff,
                Some(m) if *c == Fe::ONE => m,
                Some(m) => format!("{coeff}*{m}"),
            });
        }
        if with_prec {
            let e = self.tprec;
            let mono = if e.is_zero() {
                "1".to_string()
            } else if e == qi(1) {
                "t".to_string()
            } else if e.denom() == &1 && e.is_positive() {
                format!("t^{}", e.numer())
            } else {
                format!("t^({})", fmt_q(&e))
            };
            parts.push(format!("O({mono})"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn coeff_add(x: &CoeffElem, y: &CoeffElem) -> Result<CoeffElem> {
    if !x.same_field(y) {
        return Err(Error::ConfigMismatch);
    }
    Ok(x.add(y))
}

pub fn coeff_mul(x: &CoeffElem, y: &CoeffElem) -> Result<CoeffElem> {
    if !x.same_field(y) {
        return Err(Error::ConfigMismatch);
    }
    Ok(x.mul(y))
}

pub fn coeff_inv(x: &CoeffElem) -> Result<CoeffElem> {
    x.inv()
}

pub fn coeff_qth_root(x: &CoeffElem) -> CoeffElem {
    x.qth_root()
}

pub fn coeff_norm(x: &CoeffElem) -> NormExp {
    x.norm()
}
