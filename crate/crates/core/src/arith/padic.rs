use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rat::Rat;
use crate::error::{Error, Result};

/// A p-adic valuation. `Infinite` is reserved for the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadicVal {
    Finite(i64),
    Infinite,
}

impl PadicVal {
    pub fn finite(self) -> Option<i64> {
        match self {
            PadicVal::Finite(v) => Some(v),
            PadicVal::Infinite => None,
        }
    }
}

impl Ord for PadicVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PadicVal::Infinite, PadicVal::Infinite) => Ordering::Equal,
            (PadicVal::Infinite, _) => Ordering::Greater,
            (_, PadicVal::Infinite) => Ordering::Less,
            (PadicVal::Finite(a), PadicVal::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PadicVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PadicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicVal::Finite(v) => write!(f, "{v}"),
            PadicVal::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = 17u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Multiplicity of `p` in a nonzero integer.
pub fn vp_int(p: u64, n: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q) = v_p(num) - v_p(den)`, infinite at zero.
pub fn vp(p: u64, q: &Rat) -> Result<PadicVal> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if q.is_zero() {
        return Ok(PadicVal::Infinite);
    }
    let up = vp_int(p, q.numer()) as i64;
    let down = vp_int(p, q.denom()) as i64;
    Ok(PadicVal::Finite(up - down))
}

/// Residue of `q` modulo the prime `p`, for `q` with `v_p(q) >= 0`.
pub(crate) fn residue_mod(q: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let inv = inverse_mod(den.to_u64()?, p)?;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

pub(crate) fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Prime factors of a positive integer that fits in a machine word,
/// trial division; `None` when the integer is too large.
pub fn small_prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.to_u64()?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    Some(out)
}
