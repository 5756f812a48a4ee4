//! Seeded inputs for the benchmarks in `benches/`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robba_core::{CoeffElem, Fe, Field, Ring, WittElem, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `terms` random monomials with exponents in `[lo, lo + span)` on `(1/p^2) Z`.
pub fn coeff(field: &Arc<Field>, r: &mut ChaCha8Rng, lo: Q, span: i64, terms: usize) -> CoeffElem {
    let den = (field.p() * field.p()) as i64;
    let t: Vec<(Q, Fe)> =
        (0..terms).map(|_| (lo + Q::new(r.gen_range(0..span * den), den), Fe(r.gen_range(1..field.q())))).collect();
    CoeffElem::from_terms(field, t, field.default_tprec())
}

/// An integral Witt vector whose digit 0 is a unit.
pub fn witt(ring: &Arc<Ring>, r: &mut ChaCha8Rng) -> WittElem {
    let field = ring.field().clone();
    let digits = (0..ring.wprec())
        .map(|i| {
            let lo = if i == 0 { Q::from_integer(0) } else { Q::new(1, 4) };
            let terms = r.gen_range(1..4);
            let mut c = coeff(&field, r, lo, 3, terms);
            if i == 0 {
                c = c.add(&CoeffElem::one(&field));
            }
            c
        })
        .collect();
    WittElem::from_digits(ring, digits).expect("integral digits")
}
