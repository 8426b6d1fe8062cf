/// Sieve of Eratosthenes up to and including `limit`.
fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The first `count` primes that are `>= lower`, ascending.
pub fn primes_geq(lower: u64, count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let mut limit = (lower.max(16)).saturating_mul(2) + 64 * count as u64;
    loop {
        let found: Vec<u64> = sieve(limit)
            .into_iter()
            .filter(|&p| p >= lower)
            .take(count)
            .collect();
        if found.len() == count {
            return found;
        }
        limit *= 2;
    }
}

/// The first `count` odd primes.
pub fn odd_primes(count: usize) -> Vec<u64> {
    primes_geq(3, count)
}
