//! Generator lists of the named truncated families.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Rank1Monoid, Rank2Monoid};
use crate::arith::{odd_primes, primes_geq, QPoint2, Rat};
use crate::atomicity::{rank2_atom, Branch};
use crate::error::{Error, Result};

/// Default sample for the rank-2 family.
pub const RANK2_DEFAULT_SAMPLE: [&str; 3] = ["32/15", "7/3", "38/15"];

/// The two halves of the dyadic-versus-prime family, index `n` in `0..depth`:
/// `a1[n] = 1/(2^n p_{2n+2})` and `a2[n] = (1/3 + 1/2^n)/p_{2n+1}`, where
/// `p_k` is the `k`-th prime at least 5 (shifted by `offset`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ex44Generators {
    pub a1: Vec<Rat>,
    pub a2: Vec<Rat>,
    pub a1_primes: Vec<u64>,
    pub a2_primes: Vec<u64>,
}

impl Ex44Generators {
    pub fn all(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.a1.iter().chain(&self.a2).cloned().collect();
        v.sort();
        v
    }

    /// Index `n` of `a` inside `a2`, if it is one.
    pub fn a2_index(&self, a: &Rat) -> Option<usize> {
        self.a2.iter().position(|x| x == a)
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 {
        return Err(Error::invalid("family depth must be at least 1"));
    }
    Ok(())
}

pub fn ex44_generators(depth: u32, offset: usize) -> Result<Ex44Generators> {
    check_depth(depth)?;
    let n = depth as usize;
    let primes = primes_geq(5, 2 * n + offset);
    let p = |k: usize| primes[k - 1 + offset];
    let third = Rat::recip_of(3);
    let mut g = Ex44Generators {
        a1: Vec::with_capacity(n),
        a2: Vec::with_capacity(n),
        a1_primes: Vec::with_capacity(n),
        a2_primes: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (p1, p2) = (p(2 * i + 2), p(2 * i + 1));
        g.a1.push(Rat::pow2(-(i as i64)) * Rat::recip_of(p1));
        g.a1_primes.push(p1);
        g.a2.push((&third + &Rat::pow2(-(i as i64))) * Rat::recip_of(p2));
        g.a2_primes.push(p2);
    }
    Ok(g)
}

/// `1/p` for the first `depth` odd primes.
pub fn odd_prime_generators(depth: u32) -> Result<Vec<Rat>> {
    check_depth(depth)?;
    Ok(odd_primes(depth as usize)
        .into_iter()
        .map(Rat::recip_of)
        .collect())
}

/// Both rank-2 atoms for every `q` in `sample`, plus `(0, 1/2^n)` for
/// `n` in `1..=depth`.
pub fn rank2_generators(sample: &[Rat], depth: u32) -> Result<Vec<QPoint2>> {
    check_depth(depth)?;
    let mut out = Vec::new();
    for q in sample {
        out.push(rank2_atom(q, Branch::A)?);
        out.push(rank2_atom(q, Branch::B)?);
    }
    for n in 1..=depth {
        out.push(QPoint2::new(Rat::zero(), Rat::pow2(-(n as i64))));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn default_rank2_sample() -> Vec<Rat> {
    RANK2_DEFAULT_SAMPLE
        .iter()
        .map(|s| s.parse().expect("literal sample"))
        .collect()
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

static EX44_CACHE: Cache<(u32, usize), Rank1Monoid> = OnceLock::new();
static RANK2_CACHE: Cache<(Vec<Rat>, u32), Rank2Monoid> = OnceLock::new();

/// Shared truncation of the dyadic-versus-prime family; built once per
/// `(depth, offset)`.
pub fn ex44_monoid(depth: u32, offset: usize) -> Result<Arc<Rank1Monoid>> {
    let cache = EX44_CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&(depth, offset)) {
        return Ok(m.clone());
    }
    let built = Arc::new(Rank1Monoid::truncation(
        ex44_generators(depth, offset)?.all(),
    )?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry((depth, offset)).or_insert(built).clone())
}

/// Shared truncation of the rank-2 family.
pub fn rank2_monoid(sample: &[Rat], depth: u32) -> Result<Arc<Rank2Monoid>> {
    let cache = RANK2_CACHE.get_or_init(Default::default);
    let key = (sample.to_vec(), depth);
    if let Some(m) = cache.lock().unwrap().get(&key) {
        return Ok(m.clone());
    }
    let built = Arc::new(Rank2Monoid::truncation(rank2_generators(sample, depth)?)?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(key).or_insert(built).clone())
}
