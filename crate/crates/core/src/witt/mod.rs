//! Truncated arithmetic in `W(O_L)_E` modulo `w^N`, where `w` is the
//! uniformizer of `E`.
//!
//! An element is stored through its Teichmuller digits: the vector
//! `(x_0, ..., x_{N-1})` stands for `sum w^i [x_i] + O(w^N)`. Two backends
//! share this representation:
//!
//! * `EqualChar`: `E = F_q((w))`, so the ring is `O_L[[w]]` and digits add and
//!   multiply as power-series coefficients.
//! * `MixedCharPTypical`: `E = Q_p`, `w = p`, classical `p`-typical Witt
//!   vectors. Arithmetic goes through the universal polynomials in
//!   [`tables`].

pub mod tables;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::coeff::{CoeffElem, Field, FieldConfig, NormExp};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};
use tables::WittPolyTable;

/// Largest `N` accepted by the mixed-characteristic backend.
pub const MAX_MIXED_WPREC: usize = 5;
/// The mixed-characteristic tables have degree `p^{N-1}` in `X_0`; this caps it.
const MAX_MIXED_DEGREE: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    EqualChar,
    MixedCharPTypical,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::EqualChar => "equal_char",
            Backend::MixedCharPTypical => "mixed_char",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingConfig {
    pub field: FieldConfig,
    pub backend: Backend,
    /// Working `w`-adic precision `N`.
    pub wprec: usize,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig { field: FieldConfig::default(), backend: Backend::EqualChar, wprec: 6 }
    }
}

impl RingConfig {
    pub fn new(field: FieldConfig, backend: Backend, wprec: usize) -> Self {
        RingConfig { field, backend, wprec }
    }

    pub fn build(self) -> Result<Arc<Ring>> {
        Ring::new(self).map(Arc::new)
    }
}

/// A validated [`RingConfig`] with its coefficient field and, for the
/// mixed-characteristic backend, the digit polynomial tables.
pub struct Ring {
    config: RingConfig,
    field: Arc<Field>,
    tables: Option<WittPolyTable>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring").field("config", &self.config).finish()
    }
}

impl Ring {
    pub fn new(config: RingConfig) -> Result<Self> {
        let field = config.field.clone().build()?;
        Ring::with_field(field, config.backend, config.wprec)
    }

    /// Builds a ring over an already constructed coefficient field.
    pub fn with_field(field: Arc<Field>, backend: Backend, wprec: usize) -> Result<Self> {
        if wprec == 0 {
            return Err(Error::InvalidConfig("wprec must be positive".into()));
        }
        let tables = match backend {
            Backend::EqualChar => None,
            Backend::MixedCharPTypical => {
                if field.q() != field.p() {
                    return Err(Error::InvalidConfig(format!(
                        "mixed characteristic backend needs q = p, got q = {}",
                        field.q()
                    )));
                }
                if wprec > MAX_MIXED_WPREC {
                    return Err(Error::InvalidConfig(format!(
                        "mixed characteristic backend supports wprec <= {MAX_MIXED_WPREC}"
                    )));
                }
                if (field.p() as u64).pow(wprec as u32 - 1) > MAX_MIXED_DEGREE {
                    return Err(Error::InvalidConfig(format!(
                        "mixed characteristic tables for p = {} and wprec = {wprec} are too large",
                        field.p()
                    )));
                }
                Some(WittPolyTable::build(field.p(), wprec)?)
            }
        };
        let config = RingConfig { field: field.config().clone(), backend, wprec };
        Ok(Ring { config, field, tables })
    }

    pub fn config(&self) -> &RingConfig {
        &self.config
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn backend(&self) -> Backend {
        self.config.backend
    }

    pub fn wprec(&self) -> usize {
        self.config.wprec
    }

    pub fn tables(&self) -> Option<&WittPolyTable> {
        self.tables.as_ref()
    }

    pub fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || a.config == b.config
    }
}

/// `sum_{i<N} w^i [x_i] + O(w^N)` with every `x_i` in `O_L`.
#[derive(Clone)]
pub struct WittElem {
    ring: Arc<Ring>,
    digits: Vec<CoeffElem>,
}

impl PartialEq for WittElem {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.digits == other.digits
    }
}

impl Eq for WittElem {}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittElem({self})")
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, d) in self.digits.iter().enumerate() {
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
        parts.push(format!("O(w^{})", self.digits.len()));
        write!(f, "{}", parts.join(" + "))
    }
}

impl WittElem {
    /// Builds an element from digits; every digit must be integral.
    pub fn from_digits(ring: &Arc<Ring>, digits: Vec<CoeffElem>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::precondition("a Witt element needs at least one digit"));
        }
        for (i, d) in digits.iter().enumerate() {
            if !Field::same(d.field(), ring.field()) {
                return Err(Error::ConfigMismatch);
            }
            if !d.is_integral() {
                return Err(Error::precondition(format!("digit {i} = {d} is not in O_L")));
            }
        }
        Ok(WittElem { ring: ring.clone(), digits })
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        WittElem { ring: ring.clone(), digits: vec![CoeffElem::zero(ring.field()); ring.wprec()] }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        teichmuller(ring, &CoeffElem::one(ring.field())).expect("1 is integral")
    }

    /// `w^k`, zero when `k >= N`.
    pub fn varpi_pow(ring: &Arc<Ring>, k: usize) -> Self {
        Self::one(ring).shift(k)
    }

    /// `w - [u]`.
    pub fn linear(ring: &Arc<Ring>, u: &CoeffElem) -> Result<Self> {
        Ok(Self::varpi_pow(ring, 1).sub(&teichmuller(ring, u)?))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Field> {
        self.ring.field()
    }

    pub fn digits(&self) -> &[CoeffElem] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> Option<&CoeffElem> {
        self.digits.get(i)
    }

    /// Number of known digits `N`.
    pub fn wprec(&self) -> usize {
        self.digits.len()
    }

    /// Every stored digit vanishes at its precision.
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(CoeffElem::is_zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = n.clamp(1, self.digits.len());
        WittElem { ring: self.ring.clone(), digits: self.digits[..n].to_vec() }
    }

    /// Lowers every digit's `t`-precision to at most `tprec`.
    pub fn with_tprec(&self, tprec: Q) -> Self {
        WittElem { ring: self.ring.clone(), digits: self.digits.iter().map(|d| d.with_tprec(tprec)).collect() }
    }

    /// Least `t`-precision among the digits.
    pub fn min_tprec(&self) -> Q {
        self.digits.iter().map(CoeffElem::tprec).min().expect("at least one digit")
    }

    fn same_ring(&self, other: &WittElem) -> bool {
        Ring::same(&self.ring, &other.ring)
    }

    fn check(&self, other: &WittElem) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// Multiplication by `w^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.digits.len();
        let field = self.field();
        let mut digits: Vec<CoeffElem> = (0..k.min(n))
            .map(|_| CoeffElem::zero_with_prec(field, self.min_tprec().max(field.default_tprec())))
            .collect();
        digits.extend(self.digits.iter().take(n.saturating_sub(k)).cloned());
        WittElem { ring: self.ring.clone(), digits }
    }

    /// Division by `w^k`, assuming the first `k` digits vanish; the result has `N - k` digits.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if k >= self.digits.len() {
            return Err(Error::precondition("shift exceeds the working precision"));
        }
        if let Some(i) = self.digits[..k].iter().position(|d| !d.is_zero()) {
            return Err(Error::NotDivisible(format!("digit {i} of {self} is nonzero")));
        }
        Ok(WittElem { ring: self.ring.clone(), digits: self.digits[k..].to_vec() })
    }

    /// `[c] * x`: digit `i` becomes `c x_i`.
    pub fn teich_scale(&self, c: &CoeffElem) -> Self {
        WittElem { ring: self.ring.clone(), digits: self.digits.iter().map(|d| d.mul(c)).collect() }
    }

    pub fn add(&self, other: &WittElem) -> Self {
        assert!(self.same_ring(other), "config mismatch");
        let n = self.digits.len().min(other.digits.len());
        let digits = match self.ring.backend() {
            Backend::EqualChar => (0..n).map(|i| self.digits[i].add(&other.digits[i])).collect(),
            Backend::MixedCharPTypical => self.mixed_eval(other, n, |t| &t.sum),
        };
        WittElem { ring: self.ring.clone(), digits }
    }

    pub fn neg(&self) -> Self {
        if self.ring.backend() == Backend::MixedCharPTypical && self.ring.field().p() == 2 {
            // -1 = sum_i 2^i [1] in W(F_2)
            let field = self.field();
            let minus_one =
                WittElem { ring: self.ring.clone(), digits: vec![CoeffElem::one(field); self.digits.len()] };
            return self.mul(&minus_one);
        }
        WittElem { ring: self.ring.clone(), digits: self.digits.iter().map(CoeffElem::neg).collect() }
    }

    pub fn sub(&self, other: &WittElem) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &WittElem) -> Self {
        assert!(self.same_ring(other), "config mismatch");
        let n = self.digits.len().min(other.digits.len());
        let digits = match self.ring.backend() {
            Backend::EqualChar => (0..n)
                .map(|k| {
                    (0..=k)
                        .map(|i| self.digits[i].mul(&other.digits[k - i]))
                        .reduce(|a, b| a.add(&b))
                        .expect("k + 1 terms")
                })
                .collect(),
            Backend::MixedCharPTypical => self.mixed_eval(other, n, |t| &t.prod),
        };
        WittElem { ring: self.ring.clone(), digits }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = WittElem::one(&self.ring).truncate(self.digits.len());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates the mod `p` digit polynomials on Witt coordinates
    /// `a_i = x_i^{p^i}` and converts back through `p^n`-th roots.
    fn mixed_eval(
        &self,
        other: &WittElem,
        n: usize,
        pick: impl Fn(&WittPolyTable) -> &Vec<tables::IntPoly>,
    ) -> Vec<CoeffElem> {
        let table = self.ring.tables().expect("mixed backend has tables");
        let polys = pick(table);
        let width = table.len();
        let field = self.field().clone();
        let ff = field.ff();
        let coords: Vec<Option<CoeffElem>> = (0..2 * width)
            .map(|v| {
                let (src, i) = if v < width { (self, v) } else { (other, v - width) };
                src.digits.get(i).filter(|_| i < n).map(|d| d.frobenius_p(i as u32))
            })
            .collect();
        let mut powers: HashMap<(usize, u32), CoeffElem> = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for (level, poly) in polys.iter().enumerate().take(n) {
            let mut acc: Option<CoeffElem> = None;
            for (exps, c) in &poly.terms {
                let mut mono: Option<CoeffElem> = None;
                for (v, &k) in exps.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let base = coords[v].as_ref().expect("polynomial S_n only involves variables of index <= n");
                    let power = powers.entry((v, k)).or_insert_with(|| base.pow(k as u64)).clone();
                    mono = Some(match mono {
                        None => power,
                        Some(m) => m.mul(&power),
                    });
                }
                let term = mono.unwrap_or_else(|| CoeffElem::one(&field)).scale(ff.from_int(*c as i64));
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            let value = acc.unwrap_or_else(|| CoeffElem::zero(&field));
            out.push(value.p_power_root(level as u32));
        }
        out
    }

    /// Difference vanishes at the common precision.
    pub fn approx_eq(&self, other: &WittElem) -> bool {
        self.same_ring(other) && self.sub(other).is_zero()
    }
}

/// `[x]`: digit 0 is `x`, all other digits vanish.
pub fn teichmuller(ring: &Arc<Ring>, x: &CoeffElem) -> Result<WittElem> {
    if !Field::same(x.field(), ring.field()) {
        return Err(Error::ConfigMismatch);
    }
    if !x.is_integral() {
        return Err(Error::precondition(format!("{x} is not in O_L")));
    }
    let field = ring.field();
    let zero_prec = field.default_tprec().max(x.tprec());
    let mut digits = vec![x.clone()];
    digits.extend((1..ring.wprec()).map(|_| CoeffElem::zero_with_prec(field, zero_prec)));
    Ok(WittElem { ring: ring.clone(), digits })
}

pub fn witt_add(x: &WittElem, y: &WittElem) -> Result<WittElem> {
    x.check(y)?;
    Ok(x.add(y))
}

pub fn witt_sub(x: &WittElem, y: &WittElem) -> Result<WittElem> {
    x.check(y)?;
    Ok(x.sub(y))
}

pub fn witt_mul(x: &WittElem, y: &WittElem) -> Result<WittElem> {
    x.check(y)?;
    Ok(x.mul(y))
}

pub fn witt_neg(x: &WittElem) -> WittElem {
    x.neg()
}

/// Gauss norm `max_i p^{-i} |x_i|`, as an exponent.
pub fn lambda_norm(x: &WittElem) -> NormExp {
    let tail = NormExp::Below(qi(x.wprec() as i64));
    x.digits.iter().enumerate().fold(tail, |acc, (i, d)| acc.max(&d.norm().shift(qi(i as i64))))
}

/// Tests `|x_0| > p^{-i} |x_i|` for every `i > 0`. An element whose digits all
/// vanish at precision is treated as zero, which is stable.
pub fn is_stable(x: &WittElem) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let lead = x.digits[0].norm();
    let mut undecided: Option<Error> = None;
    for (i, d) in x.digits.iter().enumerate().skip(1) {
        let other = d.norm().shift(qi(i as i64));
        match lead.cmp_norm(&other) {
            Ok(std::cmp::Ordering::Greater) => {}
            Ok(_) => return Ok(false),
            Err(e) => {
                // a bounded digit 0 against an exact digit may still be decided
                if let (NormExp::Below(b), NormExp::Exact(a)) = (lead, other) {
                    if a <= b {
                        return Ok(false);
                    }
                }
                undecided.get_or_insert(e);
            }
        }
    }
    let tail = NormExp::Below(qi(x.wprec() as i64));
    if let Err(e) = lead.cmp_norm(&tail) {
        undecided.get_or_insert(e);
    }
    match undecided {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// Exact division by `w - [u]`.
///
/// Digits of the quotient are produced from the bottom:
/// `q_j = -r_0 / u` and `r <- (r + [q_j u]) / w - [q_j]`. With `u = 0` this
/// is a shift and the result has `N - 1` digits. In equal characteristic the
/// closed form `q_j = sum_{i>j} x_i u^{i-j-1}` is computed as well and the
/// more precise value is kept digit by digit.
pub fn div_by_linear(x: &WittElem, u: &CoeffElem) -> Result<WittElem> {
    let field = x.field().clone();
    if !Field::same(u.field(), &field) {
        return Err(Error::ConfigMismatch);
    }
    if let NormExp::Exact(e) = u.norm() {
        if e < qi(1) {
            return Err(Error::precondition(format!("|u| must be at most p^-1, got p^-({})", fmt_q(&e))));
        }
    }
    let n = x.wprec();
    if u.is_zero() {
        if !x.digits[0].is_zero() {
            return Err(Error::NotDivisible(format!("constant digit {} is nonzero and u = 0", x.digits[0])));
        }
        if n < 2 {
            return Err(Error::precondition("division by w needs at least two digits"));
        }
        return x.unshift(1);
    }
    let ring = x.ring().clone();
    let u_inv = u.inv()?;
    let mut rem = x.clone();
    let mut quotient: Vec<CoeffElem> = Vec::with_capacity(n);
    for j in 0..n {
        let mut qj = rem.digits[0].mul(&u_inv).neg();
        if let Some((e, _)) = qj.leading() {
            if e.is_negative() {
                return Err(Error::NotDivisible(format!("quotient digit {j} = {} is not integral", qj.format(true))));
            }
        }
        if qj.tprec().is_negative() {
            qj = CoeffElem::zero_with_prec(&field, qi(0));
        }
        quotient.push(qj.clone());
        if j + 1 == n {
            break;
        }
        let lifted = teichmuller(&ring, &qj.mul(u))?.truncate(rem.wprec());
        let sum = rem.add(&lifted);
        let mut next = sum.digits[1..].to_vec();
        let correction = teichmuller(&ring, &qj)?.truncate(next.len());
        let shifted = WittElem { ring: ring.clone(), digits: std::mem::take(&mut next) };
        rem = shifted.sub(&correction);
    }
    if ring.backend() == Backend::EqualChar {
        let v_u = u.val().expect("u is nonzero");
        for (j, qj) in quotient.iter_mut().enumerate() {
            let mut acc = CoeffElem::zero_with_prec(&field, qi((n - 1 - j) as i64) * v_u);
            let mut upow = CoeffElem::one(&field).assume_exact_to(u.tprec().max(field.default_tprec()));
            for i in j + 1..n {
                acc = acc.add(&x.digits[i].mul(&upow));
                upow = upow.mul(u);
            }
            if acc.tprec() > qj.tprec() {
                *qj = acc;
            }
        }
    }
    WittElem::from_digits(&ring, quotient)
}
