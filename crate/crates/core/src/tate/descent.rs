//! The Munshi-style descent: from `c + varpi x` in an ideal `m`, with `c` in
//! the multiplicative system generated by the leading coefficients of the
//! generators, produce `c' + varpi x'` in `m` with `|psi(x')| <= eps |psi(x)|`,
//! where `psi` forgets the constant term.
//!
//! Each step clears the leading term `e T^I` of `psi(x)` using a generator
//! `m_J` with `J <= I`: `x <- a_J x - e T^{I-J} m_J`, `c <- a_J c`. Terms of
//! `psi(x)` above the round's threshold `eps |psi(x_0)|` are the set bits of
//! the counter `n = sum 2^{rank(I)}`, which strictly decreases.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_to_i64, fmt_q, Q};

use super::domain::CoeffDomain;
use super::monomial::MonomialIndex;
use super::poly::TatePoly;

/// Steps allowed in one descent round.
const STEP_BUDGET: usize = 200_000;

/// A generator scaled so that the leading coefficient `a` of `psi(m)` has
/// `|a| = 1` and the leading term attains `|m|`.
#[derive(Clone, Debug)]
pub struct PreparedGenerator<D: CoeffDomain> {
    pub poly: TatePoly<D>,
    pub lead: MonomialIndex,
    pub lead_coeff: D::Elem,
    /// `-log_p` of the largest `|m_K T^K| / |m|` over `K` above the leading index.
    pub eps_exp: Option<Q>,
}

impl<D: CoeffDomain> PreparedGenerator<D> {
    pub fn new(m: &TatePoly<D>) -> Result<Self> {
        let d = m.domain();
        let psi = m.nonconstant_projection();
        let (_, a) = psi.leading_data().map_err(|_| Error::precondition(format!("generator {m} is constant")))?;
        let va = d.val(&a).expect("leading coefficient is nonzero");
        let poly = m.scale(&d.unit_of_norm(&-va)?);
        let (lead, lead_coeff) = poly.nonconstant_projection().leading_data()?;
        let alg = poly.algebra().clone();
        let top = alg.index_exp(&lead);
        if poly.gauss_exp() != Some(top) {
            return Err(Error::precondition(format!(
                "the constant term of {poly} exceeds its leading nonconstant term"
            )));
        }
        let eps_exp = poly
            .terms()
            .iter()
            .filter(|(k, _)| **k > lead)
            .filter_map(|(k, c)| poly.term_exp(k, c))
            .min()
            .map(|e| e - top);
        Ok(PreparedGenerator { poly, lead, lead_coeff, eps_exp })
    }
}

/// Prepares generators and the common `eps`. An explicit `eps_exp` must be
/// positive and no larger than the one the generators force.
pub fn prepare_generators<D: CoeffDomain>(
    gens: &[TatePoly<D>],
    eps_exp: Option<Q>,
) -> Result<(Vec<PreparedGenerator<D>>, Option<Q>)> {
    if gens.is_empty() {
        return Err(Error::precondition("no generators"));
    }
    let mut prepared = gens.iter().map(PreparedGenerator::new).collect::<Result<Vec<_>>>()?;
    // deterministic choice among equals: least index, then least degree
    prepared.sort_by(|a, b| {
        let d = a.poly.domain();
        a.lead.cmp(&b.lead).then_with(|| d.degree(&a.lead_coeff).cmp(&d.degree(&b.lead_coeff)))
    });
    let forced = prepared.iter().filter_map(|g| g.eps_exp).min();
    if let Some(forced) = forced {
        if forced <= Q::zero() {
            return Err(Error::Internal("a generator term above the leading index attains the norm".into()));
        }
    }
    let eps = match eps_exp {
        None => forced,
        Some(e) if e <= Q::zero() => {
            return Err(Error::precondition(format!(
                "eps = p^-({}) is not below 1; the descent would not terminate",
                fmt_q(&e)
            )))
        }
        Some(e) => {
            if forced.is_some_and(|f| e > f) {
                return Err(Error::precondition(format!(
                    "eps = p^-({}) is smaller than the generators allow (p^-({}))",
                    fmt_q(&e),
                    fmt_q(&forced.expect("checked"))
                )));
            }
            Some(e)
        }
    };
    Ok((prepared, eps))
}

/// `c + varpi x = mult (c_0 + varpi x_0) + sum_j cofactors_j m_j`.
#[derive(Clone, Debug)]
pub struct Certificate<D: CoeffDomain> {
    pub origin: TatePoly<D>,
    pub mult: D::Elem,
    pub cofactors: Vec<TatePoly<D>>,
}

#[derive(Clone, Debug)]
pub struct DescentState<D: CoeffDomain> {
    gens: Arc<Vec<PreparedGenerator<D>>>,
    varpi: D::Elem,
    eps_exp: Option<Q>,
    c: D::Elem,
    x: TatePoly<D>,
    /// Terms of `psi(x)` with norm exponent below this are counted.
    threshold: Option<Q>,
    n: BigUint,
    cert: Certificate<D>,
}

impl<D: CoeffDomain> DescentState<D> {
    /// Starts from `c + varpi x`, assumed to lie in the ideal generated by `gens`.
    pub fn new(gens: &[TatePoly<D>], varpi: D::Elem, c: D::Elem, x: TatePoly<D>, eps_exp: Option<Q>) -> Result<Self> {
        let (prepared, eps) = prepare_generators(gens, eps_exp)?;
        let d = x.domain().clone();
        if d.is_zero(&varpi) {
            return Err(Error::precondition("varpi must be nonzero"));
        }
        let alg = x.algebra().clone();
        let origin = TatePoly::constant(&alg, c.clone()).add(&x.scale(&varpi));
        let cofactors = vec![TatePoly::zero(&alg); prepared.len()];
        let mut state = DescentState {
            gens: Arc::new(prepared),
            varpi,
            eps_exp: eps,
            c,
            x,
            threshold: None,
            n: BigUint::zero(),
            cert: Certificate { origin, mult: d.one(), cofactors },
        };
        state.begin_round();
        Ok(state)
    }

    pub fn generators(&self) -> &[PreparedGenerator<D>] {
        &self.gens
    }

    pub fn eps_exp(&self) -> Option<Q> {
        self.eps_exp
    }

    pub fn c(&self) -> &D::Elem {
        &self.c
    }

    pub fn x(&self) -> &TatePoly<D> {
        &self.x
    }

    pub fn counter(&self) -> &BigUint {
        &self.n
    }

    pub fn certificate(&self) -> &Certificate<D> {
        &self.cert
    }

    /// Norm exponent of `psi(x)`; `None` when it vanishes.
    pub fn psi_exp(&self) -> Option<Q> {
        self.x.nonconstant_projection().gauss_exp()
    }

    /// Fixes the threshold `eps |psi(x)|` for the coming round.
    pub fn begin_round(&mut self) {
        self.threshold = match (self.psi_exp(), self.eps_exp) {
            (Some(e), Some(eps)) => Some(e + eps),
            _ => None,
        };
        self.n = self.count();
    }

    fn count(&self) -> BigUint {
        let psi = self.x.nonconstant_projection();
        let mut n = BigUint::zero();
        for (i, c) in psi.terms() {
            let big = match (self.threshold, psi.term_exp(i, c)) {
                (Some(t), Some(e)) => e < t,
                (None, Some(_)) => true,
                (_, None) => false,
            };
            if big {
                n += BigUint::one() << bit_position(i);
            }
        }
        n
    }

    /// Whether the certificate identity holds at precision.
    pub fn verify_membership(&self) -> bool {
        let alg = self.x.algebra();
        let lhs = TatePoly::constant(alg, self.c.clone()).add(&self.x.scale(&self.varpi));
        let mut rhs = self.cert.origin.scale(&self.cert.mult);
        for (g, cof) in self.gens.iter().zip(&self.cert.cofactors) {
            rhs = rhs.add(&cof.mul(&g.poly));
        }
        lhs.approx_eq(&rhs)
    }
}

fn bit_position(i: &MonomialIndex) -> usize {
    let r = i.grlex_rank();
    usize::try_from(r).expect("rank fits in usize")
}

/// One step: clears the leading term of `psi(x)`.
pub fn reduction_step<D: CoeffDomain>(state: &DescentState<D>) -> Result<DescentState<D>> {
    if state.n.is_zero() {
        return Err(Error::precondition("the counter is already zero"));
    }
    let d = state.x.domain().clone();
    let psi = state.x.nonconstant_projection();
    let (i, e) = psi.leading_data()?;
    // the scaling unit with |psi(lambda (c + varpi x))| = 1
    let psi_exp = psi.gauss_exp().expect("nonzero");
    let v_varpi = d.val(&state.varpi).expect("nonzero");
    d.unit_of_norm(&-(psi_exp + v_varpi))?;
    let g = state
        .gens
        .iter()
        .enumerate()
        .find(|(_, g)| g.lead.divides(&i))
        .ok_or_else(|| Error::NoDominatingGenerator(i.to_string()))?;
    let (gi, g) = g;
    let shift = i.sub(&g.lead).expect("divides");
    let a = &g.lead_coeff;
    let correction = g.poly.mul_term(&e, &shift);
    let x = state.x.scale(a).sub(&correction);
    if !d.is_zero(&x.coefficient(&i)) {
        return Err(Error::Internal(format!("coefficient of T^{i} survived the step")));
    }
    let mut cert = state.cert.clone();
    cert.mult = d.mul(&cert.mult, a);
    for cof in cert.cofactors.iter_mut() {
        *cof = cof.scale(a);
    }
    let varpi_e = d.mul(&state.varpi, &e);
    cert.cofactors[gi] = cert.cofactors[gi].sub(&TatePoly::monomial(state.x.algebra(), varpi_e, shift));
    let mut next = DescentState {
        gens: state.gens.clone(),
        varpi: state.varpi.clone(),
        eps_exp: state.eps_exp,
        c: d.mul(&state.c, a),
        x,
        threshold: state.threshold,
        n: BigUint::zero(),
        cert,
    };
    next.n = next.count();
    if next.n >= state.n {
        return Err(Error::Internal(format!("counter did not decrease at index {i}")));
    }
    Ok(next)
}

/// Measurements of one descent round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundReport {
    pub psi_before: Option<Q>,
    pub psi_after: Option<Q>,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct DescentOutcome<D: CoeffDomain> {
    pub c: D::Elem,
    pub x: TatePoly<D>,
    pub rounds: Vec<RoundReport>,
    pub state: DescentState<D>,
}

/// Iterates rounds until `|psi(x')| <= p^{-target} |psi(x_0)|`, using
/// `ceil(target / eps)` rounds (one when `eps = 0`).
pub fn munshi_descent<D: CoeffDomain>(state: &DescentState<D>, target: Q) -> Result<DescentOutcome<D>> {
    if target <= Q::zero() {
        return Err(Error::precondition("the target exponent must be positive"));
    }
    let rounds = match state.eps_exp {
        Some(eps) => ceil_to_i64(&(target / eps)).max(1) as usize,
        None => 1,
    };
    let start = state.psi_exp();
    let mut cur = state.clone();
    let mut reports = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let before = cur.psi_exp();
        if before.is_none() {
            break;
        }
        cur.begin_round();
        let mut steps = 0;
        while !cur.n.is_zero() {
            if steps >= STEP_BUDGET {
                return Err(Error::BudgetExceeded(format!("descent round exceeded {STEP_BUDGET} steps")));
            }
            cur = reduction_step(&cur)?;
            steps += 1;
        }
        let after = cur.psi_exp();
        if let (Some(b), Some(a), Some(eps)) = (before, after, cur.eps_exp) {
            if a < b + eps {
                return Err(Error::Internal(format!(
                    "round ended at p^-({}) above eps |psi(x)| = p^-({})",
                    fmt_q(&a),
                    fmt_q(&(b + eps))
                )));
            }
        }
        reports.push(RoundReport { psi_before: before, psi_after: after, steps });
    }
    if let (Some(s), Some(e)) = (start, cur.psi_exp()) {
        if e < s + target {
            return Err(Error::Internal(format!("descent reached p^-({}) only", fmt_q(&(e - s)))));
        }
    }
    Ok(DescentOutcome { c: cur.c.clone(), x: cur.x.clone(), rounds: reports, state: cur })
}
