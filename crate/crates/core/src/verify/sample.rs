use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{odd_primes, Rat};
use crate::element::Element;
use crate::powmon::FinSet;

/// A generator keyed by the run seed and a per-check salt, so that each
/// check sees the same stream no matter which other checks ran.
pub(crate) fn rng(seed: u64, salt: &str) -> ChaCha8Rng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in salt.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub(crate) fn subset<E: Element>(
    pool: &[E],
    sizes: RangeInclusive<usize>,
    rng: &mut ChaCha8Rng,
) -> FinSet<E> {
    let k = rng.gen_range(sizes).clamp(1, pool.len());
    FinSet::new(pool.choose_multiple(rng, k).cloned().collect::<Vec<_>>())
        .expect("pool is nonempty")
}

pub(crate) fn pairs<E: Element>(
    pool: &[E],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(FinSet<E>, FinSet<E>)> {
    (0..n)
        .map(|_| (subset(pool, 1..=4, rng), subset(pool, 1..=4, rng)))
        .collect()
}

/// `Σ c_i g_i` with each `c_i` uniform in `0..=max_coeff`.
pub(crate) fn combination(gens: &[Rat], max_coeff: u64, rng: &mut ChaCha8Rng) -> Rat {
    gens.iter().fold(Rat::zero(), |acc, g| {
        acc + g.mul_int(rng.gen_range(0..=max_coeff))
    })
}

/// A rational strictly between 2 and 3 whose denominator is a product of
/// distinct odd primes below 20.
pub(crate) fn band_rational(rng: &mut ChaCha8Rng) -> Rat {
    let primes = odd_primes(7);
    loop {
        let k = rng.gen_range(1..=2);
        let d: u64 = primes.choose_multiple(rng, k).product();
        let n = rng.gen_range(2 * d + 1..3 * d);
        let q = Rat::new(n, d).expect("nonzero denominator");
        if !q.is_integer() {
            return q;
        }
    }
}
