//! Division with norm bounds: `y = sum a_g x_g + r` with
//! `|a_g| |x_g| <= |y|` and no term of `r` reducible by any generator.

use crate::error::{Error, Result};
use crate::rational::Q;

use super::domain::CoeffDomain;
use super::monomial::MonomialIndex;
use super::poly::TatePoly;

/// Terms processed in one division.
const DIVISION_BUDGET: usize = 100_000;

#[derive(Clone, Debug, Default)]
pub struct DivideOptions {
    /// Only use generators with `|x_g| >= |term|`, so quotients lie in `R°`.
    pub integral: bool,
    /// Norm exponent at which terms are discarded; defaults to the domain's.
    pub cutoff: Option<Q>,
}

#[derive(Clone, Debug)]
pub struct Division<D: CoeffDomain> {
    pub quotients: Vec<TatePoly<D>>,
    pub remainder: TatePoly<D>,
}

impl<D: CoeffDomain> Division<D> {
    pub fn reassemble(&self, gens: &[TatePoly<D>]) -> TatePoly<D> {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(gens) {
            acc = acc.add(&q.mul(g));
        }
        acc
    }
}

struct Lead<D: CoeffDomain> {
    index: MonomialIndex,
    coeff: D::Elem,
    norm: Q,
    degree: Option<Q>,
}

fn leads<D: CoeffDomain>(gens: &[TatePoly<D>]) -> Result<Vec<Lead<D>>> {
    gens.iter()
        .map(|g| {
            let (index, coeff) = g.leading_data().map_err(|_| Error::precondition("a generator vanishes"))?;
            let degree = g.domain().degree(&coeff);
            Ok(Lead { index, coeff, norm: g.gauss_exp().expect("nonzero"), degree })
        })
        .collect()
}

/// The generator used for the term `c T^J` of norm exponent `e`: least
/// leading index, then least degree of the leading coefficient.
fn choose<'a, D: CoeffDomain>(
    leads: &'a [Lead<D>],
    j: &MonomialIndex,
    e: Q,
    integral: bool,
) -> Option<(usize, &'a Lead<D>)> {
    leads
        .iter()
        .enumerate()
        .filter(|(_, l)| l.index.divides(j) && (!integral || l.norm <= e))
        .min_by(|(_, a), (_, b)| a.index.cmp(&b.index).then_with(|| a.degree.cmp(&b.degree)))
}

/// Whether some generator can reduce the term `c T^J`.
pub fn is_reducible<D: CoeffDomain>(
    gens: &[TatePoly<D>],
    j: &MonomialIndex,
    term_exp: Q,
    integral: bool,
) -> Result<bool> {
    Ok(choose(&leads(gens)?, j, term_exp, integral).is_some())
}

pub fn norm_bounded_divide<D: CoeffDomain>(
    y: &TatePoly<D>,
    gens: &[TatePoly<D>],
    opts: &DivideOptions,
) -> Result<Division<D>> {
    let alg = y.algebra().clone();
    let d = alg.domain().clone();
    let leads = leads(gens)?;
    let cutoff = opts.cutoff.unwrap_or_else(|| d.precision_exp());
    let mut quotients = vec![TatePoly::zero(&alg); gens.len()];
    let mut remainder = TatePoly::zero(&alg);
    let mut work = y.truncate(cutoff);
    for _ in 0..DIVISION_BUDGET {
        let Ok((j, c)) = work.leading_data() else {
            remainder = remainder.with_tail(work.tail());
            return Ok(Division { quotients, remainder });
        };
        let e = work.term_exp(&j, &c).expect("nonzero");
        match choose(&leads, &j, e, opts.integral) {
            None => {
                let d = alg.domain();
                work.push_term(j.clone(), d.neg(&c));
                remainder.push_term(j, c);
            }
            Some((g, lead)) => {
                let q = d.div(&c, &lead.coeff)?;
                let shift = j.sub(&lead.index).expect("divides");
                work.sub_mul_term_truncated(&gens[g], &q, &shift, cutoff);
                if let Some(left) = work.terms().get(&j) {
                    if work.term_exp(&j, left).is_some_and(|x| x <= e) {
                        return Err(Error::indeterminate(format!("precision exhausted dividing the term at {j}")));
                    }
                }
                quotients[g].push_term(shift, q);
            }
        }
    }
    Err(Error::BudgetExceeded(format!("division processed {DIVISION_BUDGET} terms")))
}
