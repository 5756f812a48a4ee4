//! Factorization `x = y (w - [u_1]) ... (w - [u_k])` with `y` stable, in
//! equal characteristic where `x` is the power series `f(z) = sum x_i z^i`
//! over `O_L` and the `u_j` are its roots with `|u_j| <= p^{-1}`.
//!
//! Roots are found one at a time by Newton-Puiseux descent: the steepest
//! Newton-polygon segment of `f(u + z)` gives the next term `c t^nu` of the
//! root, with `c` a root of the segment's residual polynomial over `F_{q^m}`.
//! The root is divided out and the search repeats on the quotient.

use num_traits::Signed;

use crate::coeff::{CoeffElem, NormExp};
use crate::error::{Error, Result};
use crate::ffield::Fe;
use crate::rational::{has_p_power_denominator, qi, Q};
use crate::witt::{div_by_linear, is_stable, Backend, WittElem};

/// Bound on Newton-Puiseux refinement steps for a single root.
const ROOT_STEP_BUDGET: usize = 512;

#[derive(Clone, Debug)]
pub struct Factorization {
    pub y: WittElem,
    pub roots: Vec<CoeffElem>,
}

impl Factorization {
    /// `y * prod (w - [u_j])`.
    pub fn reassemble(&self) -> Result<WittElem> {
        let ring = self.y.ring().clone();
        let mut acc = self.y.clone();
        for u in &self.roots {
            acc = acc.mul(&WittElem::linear(&ring, u)?);
        }
        Ok(acc)
    }
}

fn binomial_mod_p(n: usize, k: usize, p: u32) -> i64 {
    // Lucas' theorem
    let (mut n, mut k) = (n as u64, k as u64);
    let p = p as u64;
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for j in 0..b {
            c = c * (a - j) / (j + 1);
        }
        acc = acc * (c % p) % p;
        n /= p;
        k /= p;
    }
    acc as i64
}

/// Coefficients of `f(u + z)`. The unknown digits of index `>= N` contribute
/// terms of valuation at least `(N - j) v(u)` to coefficient `j`.
fn taylor_shift(f: &[CoeffElem], u: &CoeffElem) -> Vec<CoeffElem> {
    let n = f.len();
    let field = f[0].field().clone();
    let ff = field.ff();
    let p = field.p();
    let top = f.iter().map(CoeffElem::tprec).max().expect("nonempty");
    let mut upow = vec![CoeffElem::one(&field).assume_exact_to(top)];
    for j in 1..n {
        let next = upow[j - 1].mul(u);
        upow.push(next);
    }
    (0..n)
        .map(|j| {
            let mut g = f[j].clone();
            for i in j + 1..n {
                let c = binomial_mod_p(i, j, p);
                if c != 0 {
                    g = g.add(&f[i].mul(&upow[i - j]).scale(ff.from_int(c)));
                }
            }
            match u.val() {
                Some(v) => g.with_tprec(v * qi((n - j) as i64)),
                None => g,
            }
        })
        .collect()
}

/// One root of `f` in the open disc of the steepest Newton slope, to the
/// precision the digits allow.
fn find_root(f: &[CoeffElem]) -> Result<CoeffElem> {
    let field = f[0].field().clone();
    let ff = field.ff();
    let n = f.len();
    let s = field.t_exponent();
    let mut u = CoeffElem::zero_with_prec(&field, f.iter().map(CoeffElem::tprec).max().expect("nonempty"));
    for _ in 0..ROOT_STEP_BUDGET {
        let g = taylor_shift(f, &u);
        let v0 = match g[0].val() {
            Some(v) => v,
            None => {
                // g(0) vanishes at precision: u is a root up to the nearest-root bound
                let t0 = g[0].tprec();
                let prec = g
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter_map(|(i, gi)| gi.val().map(|v| (t0 - v) / qi(i as i64)))
                    .max()
                    .ok_or_else(|| Error::indeterminate("root search: every shifted coefficient vanishes"))?;
                return Ok(u.with_tprec(prec));
            }
        };
        let mut mu: Option<Q> = None;
        for (i, gi) in g.iter().enumerate().skip(1) {
            if let Some(v) = gi.val() {
                let slope = (v0 - v) / qi(i as i64);
                mu = Some(mu.map_or(slope, |m: Q| m.max(slope)));
            }
        }
        let mu = mu.ok_or_else(|| Error::indeterminate("root search: no higher coefficient survives precision"))?;
        for (i, gi) in g.iter().enumerate().skip(1) {
            if gi.val().is_none() && (v0 - gi.tprec()) / qi(i as i64) >= mu {
                return Err(Error::indeterminate(format!("root search: coefficient {i} vanishes at precision")));
            }
        }
        if v0 / qi(n as i64) >= mu {
            return Err(Error::indeterminate("root search: truncated tail may carry the steepest slope"));
        }
        if !has_p_power_denominator(&mu, field.p()) {
            return Err(Error::OutsideField { slope: mu * s });
        }
        // residual polynomial sum lc(g_i) c^i over indices on the segment
        let residual: Vec<(usize, Fe)> = g
            .iter()
            .enumerate()
            .filter_map(|(i, gi)| {
                let (v, c) = gi.leading()?;
                (v0 - v == mu * qi(i as i64)).then_some((i, c))
            })
            .collect();
        let root = ff
            .elements()
            .filter(|c| !c.is_zero())
            .find(|&c| {
                residual.iter().fold(Fe::ZERO, |acc, &(i, a)| ff.add(acc, ff.mul(a, ff.pow(c, i as u64)))).is_zero()
            })
            .ok_or(Error::OutsideField { slope: mu * s })?;
        u = u.add(&CoeffElem::monomial(&field, root, mu).assume_exact_to(u.tprec()));
    }
    Err(Error::BudgetExceeded(format!("root search exceeded {ROOT_STEP_BUDGET} refinement steps")))
}

/// Number of roots of norm at most `p^{-1}`: the largest index attaining
/// `min_i (e_i + i)` on the digit norms.
fn linear_factor_count(x: &WittElem) -> Result<usize> {
    let norms: Vec<NormExp> = x.digits().iter().map(CoeffElem::norm).collect();
    let weighted: Vec<Option<Q>> = norms.iter().enumerate().map(|(i, e)| e.exact().map(|e| e + qi(i as i64))).collect();
    let m = weighted
        .iter()
        .flatten()
        .min()
        .copied()
        .ok_or_else(|| Error::indeterminate("every digit vanishes at precision"))?;
    let j = weighted.iter().rposition(|w| *w == Some(m)).expect("minimum attained");
    for (i, e) in norms.iter().enumerate() {
        if let NormExp::Below(b) = e {
            let w = b + qi(i as i64);
            if w < m || (w == m && i > j) {
                return Err(Error::indeterminate(format!("digit {i} vanishes at precision near the Newton polygon")));
            }
        }
    }
    if m >= qi(x.wprec() as i64) {
        return Err(Error::indeterminate("truncated digits may change the Newton polygon"));
    }
    Ok(j)
}

/// `x = y prod (w - [u_j])` with `y` stable.
pub fn factor_linear(x: &WittElem) -> Result<Factorization> {
    if x.ring().backend() != Backend::EqualChar {
        return Err(Error::Unsupported("factorization needs the equal characteristic backend".into()));
    }
    if x.is_zero() {
        return Err(Error::precondition("cannot factor an element that vanishes at precision"));
    }
    let k = linear_factor_count(x)?;
    if k == 0 {
        return Err(Error::precondition(format!("{x} is stable")));
    }
    let mut roots = Vec::with_capacity(k);
    let mut rest = x.clone();
    for _ in 0..k {
        let u = find_root(rest.digits())?;
        if !u.is_zero() && u.val().is_some_and(|v| v.is_negative()) {
            return Err(Error::Internal(format!("root {u} is not integral")));
        }
        rest = div_by_linear(&rest, &u)?;
        roots.push(u);
    }
    if !is_stable(&rest)? {
        return Err(Error::Internal(format!("cofactor {rest} is not stable after {k} roots")));
    }
    roots.sort_by_key(|u| (u.val().unwrap_or_else(|| u.tprec()), u.format(false)));
    Ok(Factorization { y: rest, roots })
}
