//! Finite fields `F_{p^d}` as `F_p[x]/(f)` with log/exp tables.
//!
//! Elements are encoded as integers `sum c_i p^i` where `c_i` are the
//! coefficients of the residue polynomial. The zero element is `0` and the
//! prime subfield is `0..p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Element of a [`FiniteField`], stored by its base-`p` encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    degree: usize,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over F_p, coefficient vectors low degree first, no trailing zeros.
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let inv_lead = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * factor as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    poly_rem(&out.into_iter().map(|c| c as u32).collect::<Vec<_>>(), m, p)
}

/// Trial-division irreducibility test over `F_p`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = trim(modulus.to_vec());
    if m.len() < 2 {
        return false;
    }
    let d = m.len() - 1;
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(&m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of the given degree.
pub fn default_modulus(p: u32, degree: usize) -> Vec<u32> {
    let count = (p as u64).pow(degree as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(degree + 1);
        let mut c = code;
        for _ in 0..degree {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds `F_p[x]/(modulus)`; the modulus must be monic and irreducible.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        let modulus = trim(modulus);
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidConfig("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidConfig("modulus coefficients must lie in 0..p".into()));
        }
        let degree = modulus.len() - 1;
        let size = (p as u64).checked_pow(degree as u32).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::InvalidConfig(format!(
                "field of size {p}^{degree} exceeds the supported maximum {MAX_FIELD_SIZE}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidConfig(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let size = size as u32;
        let encode = |poly: &[u32]| -> u32 { poly.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let decode = |mut code: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(degree);
            for _ in 0..degree {
                v.push(code % p);
                code /= p;
            }
            trim(v)
        };
        let order = size - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; size as usize];
        // find a primitive element
        'search: for cand in 1..size {
            let g = decode(cand);
            let mut cur = vec![1u32];
            for k in 0..order {
                let code = if cur.is_empty() { 0 } else { encode(&cur) };
                if k > 0 && code == 1 {
                    continue 'search;
                }
                exp[k as usize] = code;
                cur = poly_mul_mod(&cur, &g, &modulus, p);
            }
            for (k, &e) in exp.iter().enumerate() {
                log[e as usize] = k as u32;
            }
            return Ok(FiniteField { p, degree, size, modulus, exp, log });
        }
        Err(Error::Internal("no primitive element found".into()))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    /// Coefficients of the residue polynomial, low degree first.
    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        let mut code = a.0;
        (0..self.degree)
            .map(|_| {
                let c = code % self.p;
                code /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Fe {
        let reduced = poly_rem(&coeffs.iter().map(|c| c % self.p).collect::<Vec<_>>(), &self.modulus, self.p);
        Fe(reduced.iter().rev().fold(0u32, |acc, &c| acc * self.p + c))
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> Fe {
        self.from_coefficients(&[0, 1])
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let order = self.size - 1;
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % order;
        Fe(self.exp[k as usize])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let order = self.size - 1;
        let k = (order - self.log[a.0 as usize]) % order;
        Some(Fe(self.exp[k as usize]))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.size - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        Fe(self.exp[k as usize])
    }

    /// Inverse of `a -> a^(p^k)`.
    pub fn p_power_root(&self, a: Fe, k: u32) -> Fe {
        // a^(p^k) is an automorphism of order dividing degree
        let d = self.degree as u32;
        let shift = (d - k % d) % d;
        self.pow(a, (self.p as u64).pow(shift))
    }

    /// Multiplication by an integer, reduced mod p.
    pub fn scale_int(&self, a: Fe, n: i64) -> Fe {
        self.mul(a, self.from_int(n))
    }

    /// Prime-field elements print as integers, others as a polynomial in `g`.
    pub fn format(&self, a: Fe) -> String {
        if a.0 < self.p {
            return a.0.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        format!("({})", parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_arithmetic() {
        let f = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        let g = f.generator();
        // g^2 = g + 1
        assert_eq!(f.mul(g, g), f.add(g, Fe::ONE));
        assert_eq!(f.pow(g, 3), Fe::ONE);
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FiniteField::new(2, vec![1, 0, 1]).is_err());
        assert!(FiniteField::new(4, vec![1, 1]).is_err());
    }

    #[test]
    fn frobenius_roots_invert_powers() {
        let f = FiniteField::new(3, default_modulus(3, 3)).unwrap();
        for a in f.elements() {
            for k in 0..4 {
                let r = f.p_power_root(a, k);
                assert_eq!(f.pow(r, 3u64.pow(k)), a);
            }
        }
    }

    #[test]
    fn gf9_additive_group() {
        let f = FiniteField::new(3, default_modulus(3, 2)).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            assert_eq!(f.scale_int(a, 3), Fe::ZERO);
        }
    }
}
