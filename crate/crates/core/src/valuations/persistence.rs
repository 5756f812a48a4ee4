//! Persistence of an inequality at a type-5 point to nearby rank-1 points.
//!
//! If `beta_{u, r^+}(x) <= beta_{u, r^+}(y)`, then `H(u, r')(x) <= H(u, r')(y)`
//! for all radii `r'` slightly above `r`. Both sides are piecewise linear in
//! `w = rho' + 1`: level `i` of a stable presentation contributes the line
//! `i w + a_i`, `H(u, r')(w) = min(w, v(u))` contributes the factor `w^k`, and
//! the precision bounds are lines of the same shape. Between consecutive
//! crossing points of all these lines the comparison cannot change, so
//! checking one interior point per piece decides it.

use std::collections::BTreeSet;

use crate::coeff::CoeffElem;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, qi, Q};
use crate::robba::RobbaElem;
use crate::witt::lambda_norm;

use super::presentation::{eval_beta5, prepare, Prepared, ReduceStrategy};
use super::{Radius, Sign};

/// Affine pieces `slope * w + intercept` whose crossings bound the pieces.
fn lines(prep: &Prepared) -> Vec<(Q, Q)> {
    let mut base: Vec<(Q, Q)> = Vec::new();
    for (i, x) in prep.pres.entries.iter().enumerate() {
        base.push((qi(i as i64), lambda_norm(x).floor_exp()));
    }
    let depth = prep.pres.depth() as i64;
    base.push((qi(depth), lambda_norm(&prep.pres.remainder).floor_exp()));
    let n = qi(prep.pres.wprec as i64);
    base.push((n, qi(0)));
    let mut out = Vec::new();
    let k = qi(prep.k);
    for (slope, icpt) in base {
        // H(w) factor: k w for w <= v(u), k v(u) beyond
        out.push((slope + k, icpt + prep.unit));
        if let Some(c) = prep.pres.center_exp {
            out.push((slope, icpt + prep.unit + k * c));
            out.push((qi(0), n * c));
        }
    }
    out
}

/// For sign `+`, a rational `s < rho` with `H(u, rho')(x) <= H(u, rho')(y)`
/// for every `rho'` in `(s, rho)`; for sign `-`, an `s > rho` with the same
/// property on `(rho, s)`. The interval is valid, not necessarily maximal.
pub fn persistence_interval(x: &RobbaElem, y: &RobbaElem, u: &CoeffElem, rho: Q, sign: Sign) -> Result<Q> {
    let bx = eval_beta5(u, rho, sign, x)?;
    let by = eval_beta5(u, rho, sign, y)?;
    if bx.value > by.value {
        return Err(Error::precondition(format!("beta(x) = {} exceeds beta(y) = {}", bx.value, by.value)));
    }
    let px = prepare(u, x, ReduceStrategy::Minimal)?;
    let py = prepare(u, y, ReduceStrategy::Minimal)?;
    let w0 = rho + qi(1);
    let mut all = lines(&px);
    all.extend(lines(&py));
    let mut cuts: BTreeSet<Q> = BTreeSet::new();
    for (a, (sa, ia)) in all.iter().enumerate() {
        for (sb, ib) in &all[a + 1..] {
            if sa != sb {
                cuts.insert((ib - ia) / (sa - sb));
            }
        }
    }
    if let Some(c) = px.pres.center_exp {
        cuts.insert(c);
    }
    let holds = |w: Q| -> Result<bool> {
        let radius = Radius::Exp(w - qi(1));
        let hx = px.h_norm(&radius)?;
        let hy = py.h_norm(&radius)?;
        hx.le_norm(&hy)
    };
    let check = |w: Q| -> bool { matches!(holds(w), Ok(true)) };
    match sign {
        Sign::Plus => {
            // walk from w0 down to w = 1 (rho' = 0)
            let mut stops: Vec<Q> = cuts.iter().copied().filter(|c| *c < w0 && *c > qi(1)).collect();
            stops.sort();
            stops.reverse();
            stops.push(qi(1));
            let mut right = w0;
            for left in stops {
                if !check((left + right) * q(1, 2)) {
                    return finish(right, w0, sign);
                }
                right = left;
            }
            Ok(qi(0))
        }
        Sign::Minus => {
            let mut stops: Vec<Q> = cuts.iter().copied().filter(|c| *c > w0).collect();
            let end = stops.last().copied().unwrap_or(w0) + qi(1);
            stops.push(end);
            let mut left = w0;
            for right in stops {
                if !check((left + right) * q(1, 2)) {
                    return finish(left, w0, sign);
                }
                left = right;
            }
            Ok(left - qi(1))
        }
    }
}

fn finish(end_w: Q, w0: Q, sign: Sign) -> Result<Q> {
    if end_w == w0 {
        return Err(Error::indeterminate(format!(
            "comparison next to rho = {} ({}) is not decided at precision",
            fmt_q(&(w0 - qi(1))),
            sign.symbol()
        )));
    }
    Ok(end_w - qi(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::RingConfig;

    #[test]
    fn monomials_around_zero() {
        let r = RingConfig::default().build().unwrap();
        let zero = CoeffElem::zero(r.field());
        let t2 = RobbaElem::teichmuller(&r, &CoeffElem::t_pow(r.field(), qi(2))).unwrap();
        let w = RobbaElem::varpi_pow(&r, 1);
        // |[t^2]| <= |w| for every rho' <= 1
        assert_eq!(persistence_interval(&t2, &w, &zero, qi(1), Sign::Plus).unwrap(), qi(0));
        // |w| <= |[t^2]| for every rho' >= 1
        let s = persistence_interval(&w, &t2, &zero, qi(1), Sign::Minus).unwrap();
        assert!(s > qi(1));
        // the inequality flips across rho = 1
        assert!(matches!(persistence_interval(&w, &t2, &zero, qi(1), Sign::Plus), Err(Error::Precondition(_))));
        // |w| <= |[t^2]| holds on (1, 3/2) around rho = 3/2 from below
        let s = persistence_interval(&w, &t2, &zero, q(3, 2), Sign::Plus).unwrap();
        assert_eq!(s, qi(1));
    }
}
