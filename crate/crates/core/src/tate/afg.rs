//! Witnesses for almost finite generation: for an ideal `H` of `R°`
//! generated by `x_g` and a topologically nilpotent unit `u` with
//! `|u| = c = p^{-u_exp}`, where `H = (x_g) R ∩ R°`, a finite subset of `H` through which every
//! element of `uH` divides with integral quotients.
//!
//! Besides the `x_g`, level `k = 1, ..., m` with `m = ceil(log_c delta)`,
//! `delta = min |x_g|`, holds elements of `H` of norm exactly `c^k`, kept
//! minimal for `<=` on (leading index, leading degree).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{ceil_to_i64, floor_to_i64, fmt_q, qi, Q};

use super::divide::{norm_bounded_divide, DivideOptions};
use super::domain::CoeffDomain;
use super::monomial::MonomialIndex;
use super::poly::TatePoly;

#[derive(Clone, Debug)]
pub struct AfgWitness<D: CoeffDomain> {
    pub base: Vec<TatePoly<D>>,
    /// `levels[k - 1]` holds the elements of norm `c^k`.
    pub levels: Vec<Vec<TatePoly<D>>>,
    pub u_exp: Q,
}

impl<D: CoeffDomain> AfgWitness<D> {
    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn generators(&self) -> Vec<TatePoly<D>> {
        let mut out = self.base.clone();
        for level in &self.levels {
            out.extend(level.iter().cloned());
        }
        out
    }
}

/// The candidate witness, before probing.
pub fn afg_candidate<D: CoeffDomain>(gens: &[TatePoly<D>], u_exp: Q) -> Result<AfgWitness<D>> {
    if u_exp <= Q::from_integer(0) {
        return Err(Error::precondition("u must be topologically nilpotent (u_exp > 0)"));
    }
    let first = gens.first().ok_or_else(|| Error::precondition("no generators"))?;
    let d = first.domain().clone();
    if !d.in_value_group(&u_exp) {
        return Err(Error::ValueGroup(format!("p^-({}) is not a norm of a unit", fmt_q(&u_exp))));
    }
    let mut norms = Vec::with_capacity(gens.len());
    for g in gens {
        let e = g.gauss_exp().ok_or_else(|| Error::precondition("a generator vanishes"))?;
        if e < qi(0) {
            return Err(Error::precondition(format!("generator {g} is not power-bounded")));
        }
        norms.push(e);
    }
    let delta = norms.iter().copied().max().expect("nonempty");
    let m = ceil_to_i64(&(delta / u_exp)).max(0) as usize;
    let mut levels = Vec::with_capacity(m);
    for k in 1..=m {
        let ck = u_exp * qi(k as i64);
        let mut level: Vec<(MonomialIndex, Option<Q>, TatePoly<D>)> = Vec::new();
        for (g, e) in gens.iter().zip(&norms) {
            if ck > *e {
                continue;
            }
            let scaled = g.scale(&d.unit_of_norm(&(ck - e))?);
            let (lead, coeff) = scaled.leading_data()?;
            level.push((lead, d.degree(&coeff), scaled));
        }
        let kept: Vec<TatePoly<D>> = level
            .iter()
            .enumerate()
            .filter(|(a, (ia, da, _))| {
                !level
                    .iter()
                    .enumerate()
                    .any(|(b, (ib, db, _))| b != *a && ib.divides(ia) && db <= da && ((ib, db) != (ia, da) || b < *a))
            })
            .map(|(_, (_, _, p))| p.clone())
            .collect();
        levels.push(kept);
    }
    Ok(AfgWitness { base: gens.to_vec(), levels, u_exp })
}

/// A random element of `uH` with `H = (x_g) R ∩ R°`: `u sum r_g v_g x_g`
/// with integral `r_g` of degree at most 1 per variable and units `v_g` of
/// norm between 1 and `|x_g|^{-1}` in steps of `u_exp`.
pub fn sample_uh<D: CoeffDomain, R: rand::Rng + ?Sized>(
    gens: &[TatePoly<D>],
    u_exp: Q,
    rng: &mut R,
) -> Result<TatePoly<D>> {
    let alg = gens[0].algebra().clone();
    let d = alg.domain().clone();
    let n = alg.nvars();
    let mut h = TatePoly::zero(&alg);
    for g in gens {
        let mut r = TatePoly::zero(&alg);
        for _ in 0..3 {
            let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let i = MonomialIndex::new(exps);
            // keep the term in R°: |c T^I| <= 1
            let c = d.random_integral(rng);
            let shift = alg.index_exp(&i);
            let c = if shift < qi(0) { d.mul(&c, &d.unit_of_norm(&-shift)?) } else { c };
            r = r.add(&TatePoly::monomial(&alg, c, i));
        }
        let e = g.gauss_exp().unwrap_or_else(|| qi(0));
        let steps = floor_to_i64(&(e / u_exp)).max(0);
        let j = rng.gen_range(0..=steps);
        let v = d.unit_of_norm(&-(u_exp * qi(j)))?;
        h = h.add(&r.mul(g).scale(&v));
    }
    Ok(h.scale(&d.unit_of_norm(&u_exp)?))
}

/// Divides `probes` random elements of `uH` by the witness with integral
/// quotients; a nonzero remainder refutes the witness.
pub fn probe_afg<D: CoeffDomain>(witness: &AfgWitness<D>, probes: usize, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = witness.generators();
    let opts = DivideOptions { integral: true, cutoff: None };
    for k in 0..probes {
        let y = sample_uh(&witness.base, witness.u_exp, &mut rng)?;
        let div = norm_bounded_divide(&y, &gens, &opts)?;
        if !div.remainder.is_zero() {
            return Err(Error::NotGenerated(format!("probe {k}: {y} leaves remainder {}", div.remainder)));
        }
        if div.quotients.iter().any(|q| q.gauss_exp().is_some_and(|e| e < qi(0))) {
            return Err(Error::Internal(format!("probe {k}: a quotient is not integral")));
        }
    }
    Ok(())
}

/// Builds the witness and checks it against `probes` random elements.
pub fn afg_witness<D: CoeffDomain>(gens: &[TatePoly<D>], u_exp: Q, probes: usize, seed: u64) -> Result<AfgWitness<D>> {
    let w = afg_candidate(gens, u_exp)?;
    probe_afg(&w, probes, seed)?;
    Ok(w)
}
