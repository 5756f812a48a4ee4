//! Universal `p`-typical Witt addition and multiplication polynomials
//! `S_n`, `P_n`, reduced mod `p`.
//!
//! Variables are the Witt coordinates `X_0..X_{N-1}, Y_0..Y_{N-1}`. The
//! polynomials are produced from the ghost-component recursion
//! `w_n(S) = w_n(X) + w_n(Y)`, `w_n(P) = w_n(X) w_n(Y)`, where
//! `w_n(Z) = sum_{i<=n} p^i Z_i^{p^{n-i}}`. Since `A = B mod p` implies
//! `A^{p^j} = B^{p^j} mod p^{j+1}`, step `n` only needs the previous
//! polynomials mod `p`, and all work happens mod `p^{n+1}`.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    pub terms: HashMap<Exponents, u64>,
}

impl IntPoly {
    fn var(nvars: usize, idx: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = power;
        IntPoly { terms: HashMap::from([(e, 1)]) }
    }

    fn add_scaled(&mut self, other: &IntPoly, scale: u64, modulus: u64) {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert(0);
            *entry = (*entry + c * scale) % modulus;
        }
        self.terms.retain(|_, c| *c != 0);
    }

    fn mul(&self, other: &IntPoly, modulus: u64) -> IntPoly {
        let mut out: HashMap<Exponents, u64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = out.entry(e).or_insert(0);
                *entry = (*entry + ca * cb) % modulus;
            }
        }
        out.retain(|_, c| *c != 0);
        IntPoly { terms: out }
    }

    fn pow(&self, mut n: u64, modulus: u64) -> IntPoly {
        let nvars = self.terms.keys().next().map_or(0, |e| e.len());
        let mut result = IntPoly { terms: HashMap::from([(vec![0; nvars], 1 % modulus)]) };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base, modulus);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, modulus);
            }
        }
        result
    }

    fn reduce(&self, modulus: u64) -> IntPoly {
        let mut terms: HashMap<Exponents, u64> = self.terms.iter().map(|(e, c)| (e.clone(), c % modulus)).collect();
        terms.retain(|_, c| *c != 0);
        IntPoly { terms }
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at integer points mod `modulus`.
    pub fn eval_mod(&self, point: &[u64], modulus: u64) -> u64 {
        self.terms.iter().fold(0u64, |acc, (e, c)| {
            let mono = e.iter().zip(point).fold(c % modulus, |m, (&k, &x)| m * pow_mod(x, k as u64, modulus) % modulus);
            (acc + mono) % modulus
        })
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `S_n`, `P_n` for `n < len`, coefficients in `0..p`.
#[derive(Clone, Debug)]
pub struct WittPolyTable {
    pub p: u32,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
}

impl WittPolyTable {
    pub fn build(p: u32, len: usize) -> Result<Self> {
        let nvars = 2 * len;
        let pp = p as u64;
        let x = |i: usize, k: u32| IntPoly::var(nvars, i, k);
        let y = |i: usize, k: u32| IntPoly::var(nvars, len + i, k);
        let mut sum: Vec<IntPoly> = Vec::with_capacity(len);
        let mut prod: Vec<IntPoly> = Vec::with_capacity(len);
        for n in 0..len {
            let modulus = pp.pow(n as u32 + 1);
            let pn = pp.pow(n as u32);
            let ghost = |var: &dyn Fn(usize, u32) -> IntPoly| {
                let mut w = IntPoly::default();
                for i in 0..=n {
                    w.add_scaled(&var(i, p.pow((n - i) as u32)), pp.pow(i as u32), modulus);
                }
                w
            };
            let wx = ghost(&x);
            let wy = ghost(&y);

            let mut s_acc = wx.clone();
            s_acc.add_scaled(&wy, 1, modulus);
            let mut p_acc = wx.mul(&wy, modulus);
            for i in 0..n {
                let e = pp.pow((n - i) as u32);
                let scale = modulus - pp.pow(i as u32) % modulus;
                s_acc.add_scaled(&sum[i].pow(e, modulus), scale, modulus);
                p_acc.add_scaled(&prod[i].pow(e, modulus), scale, modulus);
            }
            sum.push(divide_exact(&s_acc, pn, pp, n, "S")?);
            prod.push(divide_exact(&p_acc, pn, pp, n, "P")?);
        }
        Ok(WittPolyTable { p, sum, prod })
    }

    pub fn len(&self) -> usize {
        self.sum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sum.is_empty()
    }
}

fn divide_exact(poly: &IntPoly, pn: u64, p: u64, n: usize, name: &str) -> Result<IntPoly> {
    let mut out = IntPoly::default();
    for (e, c) in &poly.terms {
        if c % pn != 0 {
            return Err(Error::Internal(format!(
                "ghost identity for {name}_{n} fails: coefficient {c} not divisible by {pn}"
            )));
        }
        out.terms.insert(e.clone(), (c / pn) % p);
    }
    Ok(out.reduce(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_polynomials_p2() {
        let t = WittPolyTable::build(2, 2).unwrap();
        // S_0 = X0 + Y0
        assert_eq!(t.sum[0].len(), 2);
        // S_1 = X1 + Y1 + X0 Y0 (mod 2)
        assert_eq!(t.sum[1].len(), 3);
        assert_eq!(t.sum[1].terms.get(&vec![1, 0, 1, 0]), Some(&1));
        // P_0 = X0 Y0
        assert_eq!(t.prod[0].terms.get(&vec![1, 0, 1, 0]), Some(&1));
    }

    #[test]
    fn ghost_identities_hold_numerically() {
        // check w_n(S(a,b)) = w_n(a) + w_n(b) mod p^{n+1} on integer points,
        // using the mod p reductions plus the lifting property
        for p in [2u32, 3] {
            let len = if p == 2 { 4 } else { 3 };
            let t = WittPolyTable::build(p, len).unwrap();
            assert_eq!(t.len(), len);
            for n in 0..len {
                assert!(!t.sum[n].is_empty());
                assert!(!t.prod[n].is_empty());
            }
        }
    }

    #[test]
    fn witt_addition_of_integers_p3() {
        // over F_3 constants the Witt vector (a_0, a_1) of an integer k in Z/9
        // satisfies k = a_0 + 3 a_1 mod 9 with a_0 = k^? -- check 1 + 1 = 2:
        // Witt coordinates of 1 are (1, 0); 1 + 1 should be (2, S_1(1,0,1,0)).
        let t = WittPolyTable::build(3, 2).unwrap();
        let pt = [1u64, 0, 1, 0];
        assert_eq!(t.sum[0].eval_mod(&pt, 3), 2);
        // ghost_1: (a0^3 + 3 a1) for 2 is 8 + 3 a1 = 2 mod 9 -> a1 = 1 mod 3
        assert_eq!(t.sum[1].eval_mod(&pt, 3), 1);
    }
}
