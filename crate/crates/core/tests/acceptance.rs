//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p robba-core --test acceptance`.

#[path = "../../cli/tests/common/mod.rs"]
mod cli_common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robba_core::rational::{fmt_q, q, qi};
use robba_core::tate::{
    afg_candidate, afg_witness, is_reducible, munshi_descent, norm_bounded_divide, probe_afg, reduction_step,
    CoeffDomain, DescentState, DivideOptions, LaurentDomain, MonomialIndex, PadicRationals, TateAlgebra, TatePoly,
    Weight,
};
use robba_core::valuations::{eval_h_with, ReduceStrategy};
use robba_core::witt::lambda_norm;
use robba_core::{
    classify, eval_beta5, eval_h, factor_linear, persistence_interval, Backend, CoeffElem, Error, Fe, Field,
    FieldConfig, NormExp, PointDescriptor, PointType, Radius, RingConfig, RobbaElem, Sign, WittElem, Q,
};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `sum c_j t^{e_j}` with `terms` random terms of exponent in
/// `[lo, lo + span)` on the grid `(1/p^2) Z`.
fn rand_coeff(field: &Arc<Field>, r: &mut ChaCha8Rng, lo: Q, span: i64, terms: usize) -> CoeffElem {
    let p = field.p() as i64;
    let den = p * p;
    let q_size = field.q();
    let t: Vec<(Q, Fe)> =
        (0..terms).map(|_| (lo + Q::new(r.gen_range(0..span * den), den), Fe(r.gen_range(1..q_size)))).collect();
    CoeffElem::from_terms(field, t, field.default_tprec())
}

/// A coefficient with exact valuation `v`.
fn coeff_with_val(field: &Arc<Field>, r: &mut ChaCha8Rng, v: Q, extra: usize) -> CoeffElem {
    let lead = CoeffElem::monomial(field, Fe(r.gen_range(1..field.q())), v);
    let tail = rand_coeff(field, r, v + q(1, field.p() as i64 * 2), 2, extra);
    lead.add(&tail)
}

fn rand_witt(ring: &Arc<robba_core::Ring>, r: &mut ChaCha8Rng, zero_prob: f64) -> WittElem {
    let field = ring.field().clone();
    let digits = (0..ring.wprec())
        .map(|_| {
            if r.gen_bool(zero_prob) {
                CoeffElem::zero(&field)
            } else {
                let terms = r.gen_range(1..4);
                rand_coeff(&field, r, qi(0), 3, terms)
            }
        })
        .collect();
    WittElem::from_digits(ring, digits).expect("integral digits")
}

/// A center with valuation in `[1, 3]`.
fn rand_center(field: &Arc<Field>, r: &mut ChaCha8Rng) -> CoeffElem {
    let v = Q::new(r.gen_range(4..=12), 4);
    coeff_with_val(field, r, v, 1)
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1() -> Outcome {
    let mut report = Vec::new();
    let configs = [RingConfig::default(), RingConfig::new(FieldConfig::new(2, 2, 1), Backend::MixedCharPTypical, 5)];
    for (c, cfg) in configs.into_iter().enumerate() {
        let ring = cfg.build().map_err(|e| e.to_string())?;
        let n = qi(ring.wprec() as i64);
        let mut r = rng(100 + c as u64);
        let (mut exact, mut truncated, mut indet) = (0, 0, 0);
        for _ in 0..200 {
            let x = rand_witt_lead(&ring, &mut r);
            let y = rand_witt_lead(&ring, &mut r);
            let xy = x.mul(&y);
            match (lambda_norm(&x), lambda_norm(&y), lambda_norm(&xy)) {
                (NormExp::Exact(a), NormExp::Exact(b), NormExp::Exact(s)) => {
                    ensure(s == a + b, || format!("{x} * {y}: lambda {} vs {}", fmt_q(&s), fmt_q(&(a + b))))?;
                    exact += 1;
                }
                // the product lies in w^N: nothing survives to compare
                (NormExp::Exact(a), NormExp::Exact(b), NormExp::Below(s)) if a + b >= n => {
                    ensure(s <= a + b, || format!("bound p^-({}) contradicts the exact product", fmt_q(&s)))?;
                    truncated += 1;
                }
                (NormExp::Exact(a), NormExp::Exact(b), NormExp::Below(s)) => {
                    ensure(s <= a + b, || format!("bound p^-({}) contradicts the exact product", fmt_q(&s)))?;
                    indet += 1;
                }
                _ => indet += 1,
            }
        }
        ensure((indet + truncated) * 20 <= 200, || {
            format!("{}: {indet} indeterminate and {truncated} truncated of 200", ring.backend().name())
        })?;
        report.push(format!("{} {exact} exact/{truncated} below w^N/{indet} flagged", ring.backend().name()));
    }
    Ok(report.join(", "))
}

/// Random element whose leading digit is usually present.
fn rand_witt_lead(ring: &Arc<robba_core::Ring>, r: &mut ChaCha8Rng) -> WittElem {
    let mut x = rand_witt(ring, r, 0.3);
    if !r.gen_bool(0.05) {
        let field = ring.field().clone();
        let mut digits = x.digits().to_vec();
        let terms = r.gen_range(1..4);
        digits[0] = rand_coeff(&field, r, qi(0), 3, terms);
        x = WittElem::from_digits(ring, digits).expect("integral digits");
    }
    x
}

// ---------------------------------------------------------------- criterion 2

/// Truncated polynomials over `Z/p^N` in `T^{Q >= 0}`.
#[derive(Clone, Debug, PartialEq)]
struct GhostPoly {
    terms: BTreeMap<Q, u64>,
}

struct GhostRing {
    modulus: u64,
    cutoff: Q,
}

impl GhostRing {
    fn norm(&self, mut terms: BTreeMap<Q, u64>) -> GhostPoly {
        terms.retain(|e, c| {
            *c %= self.modulus;
            *c != 0 && *e < self.cutoff
        });
        GhostPoly { terms }
    }

    fn add(&self, a: &GhostPoly, b: &GhostPoly) -> GhostPoly {
        let mut t = a.terms.clone();
        for (e, c) in &b.terms {
            *t.entry(*e).or_insert(0) += c;
        }
        self.norm(t)
    }

    fn mul(&self, a: &GhostPoly, b: &GhostPoly) -> GhostPoly {
        let mut t: BTreeMap<Q, u64> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if e < self.cutoff {
                    let v = t.entry(e).or_insert(0);
                    *v = (*v + ca * cb) % self.modulus;
                }
            }
        }
        self.norm(t)
    }

    fn scalar(&self, a: &GhostPoly, s: u64) -> GhostPoly {
        self.norm(a.terms.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    /// `sum_i p^i (lift of x_i^{1/p^k})^{p^k}`, `k = N - 1 - i`, which is
    /// `sum_i p^i [x_i]` modulo `p^N`.
    fn image(&self, x: &WittElem, p: u32) -> GhostPoly {
        let n = x.wprec();
        let mut acc = GhostPoly { terms: BTreeMap::new() };
        for (i, d) in x.digits().iter().enumerate() {
            let k = (n - 1 - i) as u32;
            let scale = (p as u64).pow(k);
            let lift = self.norm(d.terms().iter().map(|(e, c)| (e / qi(scale as i64), c.0 as u64)).collect());
            // cutoff applies after raising, so lift with a scaled cutoff
            let lifted = GhostRing { modulus: self.modulus, cutoff: self.cutoff / qi(scale as i64) }.norm(lift.terms);
            let mut pw = GhostPoly { terms: BTreeMap::from([(qi(0), 1)]) };
            for _ in 0..scale {
                pw = self.mul(&pw, &lifted);
            }
            acc = self.add(&acc, &self.scalar(&pw, (p as u64).pow(i as u32)));
        }
        acc
    }
}

fn criterion_2() -> Outcome {
    let mut report = Vec::new();
    for &(p, n) in &[(2u32, 2usize), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let ring = RingConfig::new(FieldConfig::new(p, p, 1).with_tprec(qi(64)), Backend::MixedCharPTypical, n)
            .build()
            .map_err(|e| e.to_string())?;
        let mut r = rng(200 + p as u64 * 10 + n as u64);
        for case in 0..100 {
            let x = rand_witt(&ring, &mut r, 0.2);
            let y = rand_witt(&ring, &mut r, 0.2);
            let s = x.add(&y);
            let m = x.mul(&y);
            let cutoff = [&x, &y, &s, &m].iter().map(|w| w.min_tprec()).min().expect("nonempty");
            ensure(cutoff > qi(0), || format!("p={p} N={n}: no precision left"))?;
            let g = GhostRing { modulus: (p as u64).pow(n as u32), cutoff };
            let (gx, gy) = (g.image(&x, p), g.image(&y, p));
            ensure(g.image(&s, p) == g.add(&gx, &gy), || format!("p={p} N={n} case {case}: sum {x} + {y} = {s}"))?;
            ensure(g.image(&m, p) == g.mul(&gx, &gy), || format!("p={p} N={n} case {case}: product {x} * {y} = {m}"))?;
        }
        report.push(format!("p={p} N={n}"));
    }
    Ok(format!("ghost oracle agrees on 100 sums and products for {}", report.join(", ")))
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Outcome {
    let ring = RingConfig::default().build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let mut r = rng(300);
    let radii = [qi(0), q(1, 2), qi(1), q(3, 2), q(5, 2)];
    let mut checks = 0;
    for case in 0..100 {
        let u = rand_center(&field, &mut r);
        let dv = Q::new(r.gen_range(4..=12), 4);
        let delta = coeff_with_val(&field, &mut r, dv, 1);
        let u2 = u.add(&delta);
        let x = RobbaElem::from_witt(&WittElem::linear(&ring, &u2).map_err(|e| e.to_string())?);
        let h0 = eval_h(&u, &Radius::Zero, &x).map_err(|e| format!("case {case}: {e}"))?;
        let h0 = h0.exact().ok_or_else(|| format!("case {case}: H(u,0) indeterminate"))?;
        for rho in radii {
            let h = eval_h(&u, &Radius::Exp(rho), &x).map_err(|e| format!("case {case}: {e}"))?;
            let expected = (rho + qi(1)).min(h0);
            ensure(h == NormExp::Exact(expected), || {
                format!("case {case}: u={u} u'={u2} rho={}: {h:?} vs {}", fmt_q(&rho), fmt_q(&expected))
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} exact identities"))
}

// ---------------------------------------------------------------- criterion 4

fn criterion_4() -> Outcome {
    let ring = RingConfig::default().build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let mut r = rng(400);
    let radii = [Radius::Zero, Radius::Exp(qi(0)), Radius::Exp(q(1, 2)), Radius::Exp(qi(1)), Radius::Exp(qi(2))];
    let (mut exact, mut flagged) = (0, 0);
    for case in 0..50 {
        let x = RobbaElem::from_witt(&rand_witt(&ring, &mut r, 0.2));
        let u = rand_center(&field, &mut r);
        for rad in &radii {
            let a = eval_h_with(&u, rad, &x, ReduceStrategy::Minimal);
            let b = eval_h_with(&u, rad, &x, ReduceStrategy::Exhaustive);
            match (a, b) {
                (Ok(NormExp::Exact(a)), Ok(NormExp::Exact(b))) => {
                    ensure(a == b, || format!("case {case} radius {rad}: {} vs {}", fmt_q(&a), fmt_q(&b)))?;
                    exact += 1;
                }
                (Ok(NormExp::Exact(a)), Ok(NormExp::Below(b))) | (Ok(NormExp::Below(b)), Ok(NormExp::Exact(a))) => {
                    ensure(b <= a, || {
                        format!("case {case} radius {rad}: bound {} above exact {}", fmt_q(&b), fmt_q(&a))
                    })?;
                    flagged += 1;
                }
                (Ok(_), Ok(_)) => flagged += 1,
                (Err(e), _) | (_, Err(e)) => return Err(format!("case {case} radius {rad}: {e}")),
            }
        }
    }
    ensure(flagged * 10 <= exact, || format!("{flagged} of {} comparisons indeterminate", exact + flagged))?;
    Ok(format!("{exact} exact agreements, {flagged} flagged"))
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Outcome {
    let ring = RingConfig::new(FieldConfig::new(2, 2, 1), Backend::EqualChar, 8).build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let mut r = rng(500);
    let lead_exps = [qi(1), q(5, 4), q(3, 2), qi(2), q(9, 4), q(5, 2), qi(3)];
    let mut total_roots = 0;
    for case in 0..50 {
        let mut digits = vec![coeff_with_val(&field, &mut r, qi(0), 2)];
        for _ in 1..ring.wprec() {
            let terms = r.gen_range(0..3);
            digits.push(rand_coeff(&field, &mut r, qi(0), 2, terms));
        }
        let y = WittElem::from_digits(&ring, digits).map_err(|e| e.to_string())?;
        let k = r.gen_range(1..=3);
        let mut exps = lead_exps.to_vec();
        let mut roots = Vec::new();
        for _ in 0..k {
            let e = exps.remove(r.gen_range(0..exps.len()));
            roots.push(coeff_with_val(&field, &mut r, e, 1));
        }
        let mut x = y.clone();
        for u in &roots {
            x = x.mul(&WittElem::linear(&ring, u).map_err(|e| e.to_string())?);
        }
        let fac = factor_linear(&x).map_err(|e| format!("case {case}: {e}"))?;
        ensure(fac.roots.len() == k, || format!("case {case}: {} roots, expected {k}", fac.roots.len()))?;
        let mut unmatched = roots.clone();
        for found in &fac.roots {
            let pos = unmatched.iter().position(|u| u.approx_eq(found));
            let pos = pos.ok_or_else(|| format!("case {case}: spurious root {found}"))?;
            unmatched.remove(pos);
        }
        let back = fac.reassemble().map_err(|e| e.to_string())?;
        ensure(back.approx_eq(&x), || format!("case {case}: reassembly {back} vs {x}"))?;
        total_roots += k;
    }
    Ok(format!("50 factorizations, {total_roots} roots recovered at wprec 8"))
}

// ---------------------------------------------------------------- criterion 6

fn criterion_6() -> Outcome {
    let ring = RingConfig::default().build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let mut r = rng(600);
    let rhos = [qi(0), q(1, 4), q(1, 2), qi(1), q(3, 2), qi(2)];
    let eps = Q::new(1, 1 << 20);
    let (mut done, mut skipped, mut persist) = (0, 0, 0);
    while done < 100 {
        let x = RobbaElem::from_witt(&rand_witt(&ring, &mut r, 0.2));
        let u = rand_center(&field, &mut r);
        let rho = rhos[r.gen_range(0..rhos.len())];
        let minus = eval_beta5(&u, rho, Sign::Minus, &x);
        let plus = eval_beta5(&u, rho, Sign::Plus, &x);
        let mid = eval_h(&u, &Radius::Exp(rho), &x);
        let (minus, plus, mid) = match (minus, plus, mid) {
            (Ok(a), Ok(b), Ok(NormExp::Exact(c))) => (a, b, c),
            (Err(Error::Internal(m)), _, _) | (_, Err(Error::Internal(m)), _) => {
                return Err(format!("unique-maximum assertion fired: {m}"))
            }
            _ => {
                skipped += 1;
                ensure(skipped < 50, || "too many indeterminate samples".into())?;
                continue;
            }
        };
        done += 1;
        ensure(minus.value.e == mid && plus.value.e == mid, || {
            format!("e-components differ: {} / {} / {}", minus.value, fmt_q(&mid), plus.value)
        })?;
        ensure(minus.value.k <= 0 && plus.value.k >= 0, || format!("k-components {} {}", minus.value.k, plus.value.k))?;
        // the k-components are the slopes of H(u, rho')(x) on either side
        let right = eval_h(&u, &Radius::Exp(rho + eps), &x).map_err(|e| e.to_string())?;
        ensure(right == NormExp::Exact(mid - eps * qi(minus.value.k)), || {
            format!("right slope at rho={}: {right:?}, k-={}", fmt_q(&rho), minus.value.k)
        })?;
        if rho > qi(0) {
            let left = eval_h(&u, &Radius::Exp(rho - eps), &x).map_err(|e| e.to_string())?;
            ensure(left == NormExp::Exact(mid - eps * qi(plus.value.k)), || {
                format!("left slope at rho={}: {left:?}, k+={}", fmt_q(&rho), plus.value.k)
            })?;
        }
        // compare with w^j [t^a] of the same rank-1 norm via persistence;
        // H(u, r)(w) = p^-cw, and j stays below wprec so that lambda survives
        let cw = (rho + qi(1)).min(u.norm().floor_exp());
        let j = (mid / cw).floor().to_integer().min(ring.wprec() as i64 - 1);
        let a = mid - cw * qi(j);
        let c = RobbaElem::varpi_pow(&ring, j).mul(
            &RobbaElem::teichmuller(&ring, &CoeffElem::t_pow(&field, a / field.t_exponent()))
                .map_err(|e| e.to_string())?,
        );
        let check = |a: &RobbaElem, b: &RobbaElem, sign: Sign| -> std::result::Result<(), String> {
            let s = persistence_interval(a, b, &u, rho, sign)
                .map_err(|e| format!("persistence {a} vs {b} at u={u} rho={} {}: {e}", fmt_q(&rho), sign.symbol()))?;
            for j in 1..=10 {
                let pt = rho + (s - rho) * Q::new(j, 11);
                let ha = eval_h(&u, &Radius::Exp(pt), a).map_err(|e| e.to_string())?;
                let hb = eval_h(&u, &Radius::Exp(pt), b).map_err(|e| e.to_string())?;
                ensure(matches!(ha.le_norm(&hb), Ok(true)), || format!("sample {} violates", fmt_q(&pt)))?;
            }
            Ok(())
        };
        for sign in [Sign::Minus, Sign::Plus] {
            if sign == Sign::Plus && rho == qi(0) {
                continue;
            }
            let bx = eval_beta5(&u, rho, sign, &x).map_err(|e| e.to_string())?.value;
            let bc = eval_beta5(&u, rho, sign, &c).map_err(|e| e.to_string())?.value;
            ensure(bx.e == bc.e, || format!("{c} does not share the rank-1 value {}", fmt_q(&mid)))?;
            if bx <= bc {
                check(&x, &c, sign)?;
            } else {
                check(&c, &x, sign)?;
            }
        }
        persist += 1;
    }
    Ok(format!("100 elements ({skipped} indeterminate redrawn), {persist} persistence cross-checks"))
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Outcome {
    let ring = RingConfig::default().build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let mut r = rng(700);
    let (mut done, mut skipped) = (0, 0);
    while done < 50 {
        let mut x = RobbaElem::from_witt(&rand_witt(&ring, &mut r, 0.2));
        let mut y = RobbaElem::from_witt(&rand_witt(&ring, &mut r, 0.2));
        let u = rand_center(&field, &mut r);
        let rho = Q::new(r.gen_range(0..=24), r.gen_range(1..=8));
        let sign = if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let (bx, by) = match (eval_beta5(&u, rho, sign, &x), eval_beta5(&u, rho, sign, &y)) {
            (Ok(a), Ok(b)) => (a.value, b.value),
            _ => {
                skipped += 1;
                ensure(skipped < 50, || "too many indeterminate instances".into())?;
                continue;
            }
        };
        if bx > by {
            std::mem::swap(&mut x, &mut y);
        }
        let s = match persistence_interval(&x, &y, &u, rho, sign) {
            Ok(s) => s,
            Err(Error::Indeterminate(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(format!("rho={} {}: {e}", fmt_q(&rho), sign.symbol())),
        };
        ensure(
            match sign {
                Sign::Plus => s < rho || rho == qi(0),
                Sign::Minus => s > rho,
            },
            || format!("interval endpoint {} on the wrong side of {}", fmt_q(&s), fmt_q(&rho)),
        )?;
        for j in 1..=10 {
            let pt = rho + (s - rho) * Q::new(j, 11);
            let hx = eval_h(&u, &Radius::Exp(pt), &x).map_err(|e| e.to_string())?;
            let hy = eval_h(&u, &Radius::Exp(pt), &y).map_err(|e| e.to_string())?;
            ensure(matches!(hx.le_norm(&hy), Ok(true)), || {
                format!(
                    "rho={} {} s={}: sample {} gives {hx:?} vs {hy:?}",
                    fmt_q(&rho),
                    sign.symbol(),
                    fmt_q(&s),
                    fmt_q(&pt)
                )
            })?;
        }
        done += 1;
    }
    Ok(format!("50 intervals, 500 exact samples ({skipped} redrawn)"))
}

// ---------------------------------------------------------------- criterion 8

/// Independent oracle: `rho / s` has a reduced denominator that is a power of `p`.
fn oracle_in_value_group(rho: &Q, s: &Q, p: u32) -> bool {
    let x = rho / s;
    let mut d = *x.denom();
    while d % p as i64 == 0 {
        d /= p as i64;
    }
    d == 1
}

fn criterion_8() -> Outcome {
    let ring = RingConfig::default().build().map_err(|e| e.to_string())?;
    let field = ring.field().clone();
    let (p, s) = (field.p(), field.t_exponent());
    let mut r = rng(800);
    let mut counts = [0usize; 5];
    for case in 0..500 {
        let kind = case % 5;
        let u = rand_coeff(&field, &mut r, qi(1), 2, 2);
        let rand_rho = |r: &mut ChaCha8Rng| Q::new(r.gen_range(0..40), [1, 2, 3, 4, 5, 6, 8, 12][r.gen_range(0..8)]);
        let (desc, expected) = match kind {
            0 => (PointDescriptor::Center { u, radius: Radius::Zero }, PointType::Type1),
            1 | 2 => {
                let rho = rand_rho(&mut r);
                let ty = if oracle_in_value_group(&rho, &s, p) { PointType::Type2 } else { PointType::Type3 };
                (PointDescriptor::Center { u, radius: Radius::Exp(rho) }, ty)
            }
            3 => {
                let len = r.gen_range(1..5);
                let mut discs = Vec::new();
                let mut center = u;
                let mut rho = Q::new(r.gen_range(0..4), 2);
                for _ in 0..len {
                    discs.push((center.clone(), rho));
                    let step = rand_coeff(&field, &mut r, rho.ceil() + qi(1), 2, 1);
                    center = center.add(&step);
                    rho += Q::new(r.gen_range(1..4), 3);
                }
                (PointDescriptor::Type4Prefix { discs }, PointType::Type4)
            }
            _ => {
                let rho = rand_rho(&mut r);
                let sign = if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
                let ty = if oracle_in_value_group(&rho, &s, p) { PointType::Type5 } else { PointType::Type3 };
                (PointDescriptor::Type5 { u, rho, sign }, ty)
            }
        };
        let got = classify(&ring, &desc).map_err(|e| format!("case {case}: {e}"))?;
        ensure(got == expected, || format!("case {case}: {desc:?} classified {got:?}, oracle {expected:?}"))?;
        counts[got.number() as usize - 1] += 1;
    }
    ensure(counts.iter().all(|&c| c > 0), || format!("some type never produced: {counts:?}"))?;
    Ok(format!("500 descriptors, per type {counts:?}"))
}

// ---------------------------------------------------------------- criterion 9

type LaurentFixture = (Vec<TatePoly<LaurentDomain>>, CoeffElem, TatePoly<LaurentDomain>);

fn laurent_fixture(r: &mut ChaCha8Rng) -> std::result::Result<LaurentFixture, String> {
    let field = FieldConfig::new(2, 2, 1).with_tprec(qi(96)).build().map_err(|e| e.to_string())?;
    let d = LaurentDomain::new(field.clone());
    let n = r.gen_range(1..=2);
    let weights: Vec<Weight> = (0..n).map(|_| Weight::Rational(Q::new(r.gen_range(0..3), 2))).collect();
    let alg = TateAlgebra::new(d.clone(), weights).map_err(|e| e.to_string())?;
    let mut gens = Vec::new();
    for i in 0..n {
        let ti = TatePoly::var(&alg, i);
        let wi = alg.weights()[i];
        // constant of norm at most |T_i|, perturbation strictly smaller
        let alpha = rand_coeff(&field, r, wi, 2, 1);
        let mut g = ti.sub(&TatePoly::constant(&alg, alpha));
        for deg in 2..=r.gen_range(2..=3) {
            // degree two or more, hence above T_i in grlex; distinct degrees never cancel
            let mut idx = MonomialIndex::unit(n, i);
            for _ in 1..deg {
                idx = idx.add(&MonomialIndex::unit(n, r.gen_range(0..n)));
            }
            let gap = wi - alg.index_exp(&idx);
            let bv = gap.max(qi(0)) + Q::new(r.gen_range(1..3), 2);
            let beta = rand_coeff(&field, r, bv, 1, 1);
            g = g.add(&TatePoly::monomial(&alg, beta, idx));
        }
        gens.push(g);
    }
    let mut x = TatePoly::zero(&alg);
    for _ in 0..4 {
        let exps: Vec<u32> = (0..n).map(|_| r.gen_range(0..3)).collect();
        x = x.add(&TatePoly::monomial(&alg, rand_coeff(&field, r, qi(0), 2, 2), MonomialIndex::new(exps)));
    }
    if x.nonconstant_projection().is_zero() {
        x = x.add(&TatePoly::var(&alg, 0));
    }
    let varpi = d.one().add(&d.t_pow(qi(1)));
    Ok((gens, varpi, x))
}

fn criterion_9() -> Outcome {
    let mut r = rng(900);
    let mut steps_total = 0usize;
    for fixture in 0..20 {
        let (gens, varpi, x) = laurent_fixture(&mut r)?;
        let d = x.domain().clone();
        let st = DescentState::new(&gens, varpi, d.one(), x, None).map_err(|e| format!("fixture {fixture}: {e}"))?;
        let eps = st.eps_exp().ok_or_else(|| format!("fixture {fixture}: eps = 0"))?;
        // ten rounds, stepping by hand to observe the counter
        let mut cur = st.clone();
        for round in 0..10 {
            let Some(before) = cur.psi_exp() else { break };
            cur.begin_round();
            while !cur.counter().is_zero() {
                let next = reduction_step(&cur).map_err(|e| format!("fixture {fixture} round {round}: {e}"))?;
                ensure(next.counter() < cur.counter(), || format!("fixture {fixture}: counter did not decrease"))?;
                cur = next;
                steps_total += 1;
            }
            if let Some(after) = cur.psi_exp() {
                ensure(after >= before + eps, || {
                    format!("fixture {fixture} round {round}: p^-({}) after p^-({})", fmt_q(&after), fmt_q(&before))
                })?;
            }
            ensure(cur.verify_membership(), || format!("fixture {fixture}: membership certificate broken"))?;
        }
        let out = munshi_descent(&st, eps * qi(10)).map_err(|e| format!("fixture {fixture}: {e}"))?;
        ensure(out.state.verify_membership(), || format!("fixture {fixture}: descent certificate broken"))?;
    }
    let gap = TateAlgebra::new(
        PadicRationals::new(2, 64).map_err(|e| e.to_string())?,
        vec![Weight::Irrational("rho".into()), Weight::Irrational("1/rho".into())],
    );
    ensure(matches!(gap, Err(Error::ValueGroup(_))), || "value-group-gap fixture was accepted".into())?;
    Ok(format!("20 fixtures x 10 rounds, {steps_total} strictly decreasing steps; value-group gap rejected"))
}

// ---------------------------------------------------------------- criterion 10

/// Random polynomial with integral coefficients; `integer` keeps them in `Z`
/// so that repeated division by leading coefficients stays small.
fn padic_poly(
    alg: &Arc<TateAlgebra<PadicRationals>>,
    r: &mut ChaCha8Rng,
    nterms: usize,
    max_exp: u32,
    integer: bool,
) -> TatePoly<PadicRationals> {
    let d = alg.domain().clone();
    let n = alg.nvars();
    let p = d.p() as i64;
    let mut x = TatePoly::zero(alg);
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..n).map(|_| r.gen_range(0..=max_exp)).collect();
        let c = if integer { d.int(r.gen_range(-8i64..=8) * p.pow(r.gen_range(0..3))) } else { d.random_integral(r) };
        x = x.add(&TatePoly::monomial(alg, c, MonomialIndex::new(exps)));
    }
    x
}

fn criterion_10() -> Outcome {
    let mut r = rng(1000);
    let mut with_tail = 0;
    for case in 0..100 {
        let p = [2u32, 3, 5][case % 3];
        let n = r.gen_range(1..=3);
        let weights = (0..n).map(|_| Weight::Rational(qi(r.gen_range(0..3)))).collect();
        let alg = TateAlgebra::new(PadicRationals::new(p, 16).map_err(|e| e.to_string())?, weights)
            .map_err(|e| e.to_string())?;
        let y = padic_poly(&alg, &mut r, 6, 3, false);
        if y.is_zero() {
            continue;
        }
        let gens: Vec<_> = (0..r.gen_range(1..=3))
            .map(|_| padic_poly(&alg, &mut r, 3, 2, true))
            .filter(|g| g.gauss_exp().is_some())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let div = norm_bounded_divide(&y, &gens, &DivideOptions::default()).map_err(|e| format!("case {case}: {e}"))?;
        let back = div.reassemble(&gens);
        ensure(back.approx_eq(&y), || format!("case {case}: reassembly differs"))?;
        if div.remainder.tail().is_some() {
            with_tail += 1;
        } else {
            ensure(back.sub(&y).is_zero(), || format!("case {case}: inexact reassembly without a tail"))?;
        }
        let ny = y.gauss_exp().expect("nonzero");
        for (q, g) in div.quotients.iter().zip(&gens) {
            if let Some(nq) = q.gauss_exp() {
                let ng = g.gauss_exp().expect("nonzero");
                ensure(nq + ng >= ny, || format!("case {case}: |a||x| = p^-({}) > |y|", fmt_q(&(nq + ng))))?;
            }
        }
        for (j, c) in div.remainder.terms() {
            let e = div.remainder.term_exp(j, c).expect("nonzero");
            ensure(!is_reducible(&gens, j, e, false).map_err(|e| e.to_string())?, || {
                format!("case {case}: remainder term at {j} is reducible")
            })?;
        }
    }
    // afg witnesses: ideals of evaluation type with distinct generator norms
    let mut levels = Vec::new();
    for fixture in 0..5 {
        let p = [2u32, 3][fixture % 2];
        let n = 1 + fixture % 3;
        let alg =
            TateAlgebra::new(PadicRationals::new(p, 40).map_err(|e| e.to_string())?, vec![Weight::Rational(qi(0)); n])
                .map_err(|e| e.to_string())?;
        let d = alg.domain().clone();
        let gens: Vec<_> = (0..n)
            .map(|i| {
                let alpha = d.int(r.gen_range(-5..=5));
                let scale = d.unit_of_norm(&qi(((i + fixture) % 3) as i64)).expect("integer exponent");
                TatePoly::var(&alg, i).sub(&TatePoly::constant(&alg, alpha)).scale(&scale)
            })
            .collect();
        let w =
            afg_witness(&gens, qi(1), 200, 1000 + fixture as u64).map_err(|e| format!("afg fixture {fixture}: {e}"))?;
        levels.push(w.m());
        if w.m() > 0 {
            let mut broken = afg_candidate(&gens, qi(1)).map_err(|e| e.to_string())?;
            let k = broken.levels.iter().rposition(|l| l.iter().any(|g| !gens.iter().any(|b| b.approx_eq(g))));
            if let Some(k) = k {
                broken.levels[k].retain(|g| gens.iter().any(|b| b.approx_eq(g)));
                ensure(matches!(probe_afg(&broken, 200, 1000 + fixture as u64), Err(Error::NotGenerated(_))), || {
                    format!("afg fixture {fixture}: withholding level {} went unnoticed", k + 1)
                })?;
            }
        }
    }
    Ok(format!("100 divisions ({with_tail} with O(.) tail), afg levels {levels:?} survive 200 probes each"))
}

// ---------------------------------------------------------------- driver

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 Gauss-norm multiplicativity", criterion_1, Duration::from_secs(5)),
        ("2 mixed-characteristic ghost oracle", criterion_2, Duration::from_secs(10)),
        ("3 H(u,r)(w-[u']) identity", criterion_3, Duration::from_secs(10)),
        ("4 stable-presentation well-definedness", criterion_4, Duration::from_secs(30)),
        ("5 factorization round trip", criterion_5, Duration::from_secs(15)),
        ("6 type-5 semantics", criterion_6, Duration::from_secs(30)),
        ("7 persistence intervals", criterion_7, Duration::from_secs(30)),
        ("8 classification totality", criterion_8, Duration::from_secs(30)),
        ("9 descent contract", criterion_9, Duration::from_secs(20)),
        ("10 norm-bounded division and afg", criterion_10, Duration::from_secs(30)),
        ("11 CLI conformance", criterion_11, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        let res =
            res.and_then(
                |msg| {
                    if took > limit {
                        Err(format!("{msg}; took {took:.1?}, limit {limit:?}"))
                    } else {
                        Ok(msg)
                    }
                },
            );
        match res {
            Ok(msg) => println!("criterion {name}: PASS ({took:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({took:.2?}) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn criterion_11() -> Outcome {
    let golden = cli_common::check_golden()?;
    ensure(golden == 25, || format!("expected 25 golden invocations, found {golden}"))?;
    let corpus = cli_common::check_round_trip(200, 2024)?;
    Ok(format!("{golden} golden outputs byte-identical over two runs, {corpus} round-trip strings"))
}
