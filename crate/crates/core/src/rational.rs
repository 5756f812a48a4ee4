//! Rational helpers. Exponents throughout the crate are exact `i64` ratios.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// True when the reduced denominator of `x` is a power of `p`.
pub fn has_p_power_denominator(x: &Q, p: u32) -> bool {
    let mut d = *x.denom();
    while d % p as i64 == 0 {
        d /= p as i64;
    }
    d == 1
}

/// True when `x` lies in `scale * Z[1/p]`.
pub fn in_scaled_p_group(x: &Q, scale: &Q, p: u32) -> bool {
    if scale.is_zero() {
        return x.is_zero();
    }
    has_p_power_denominator(&(x / scale), p)
}

pub fn ceil_to_i64(x: &Q) -> i64 {
    x.ceil().to_integer()
}

pub fn floor_to_i64(x: &Q) -> i64 {
    x.floor().to_integer()
}

/// Formats `a/b`, or `a` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<i64>().ok().map(Q::from_integer),
    }
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
