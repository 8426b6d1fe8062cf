//! Acceptance criteria, one PASS/FAIL line each. Expected values come from
//! the brute-force oracles below, which share no search code with the
//! library.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powmon::arith::{QPoint2, Rat};
use powmon::atomicity::{
    canonical_decomp_q, k_of, lemma54_sum_witness, p_furstenberg_divisor,
    tidf_implies_atomic_check, Branch, DivisorBranch,
};
use powmon::mcd::{
    cap_residue, chain_values, ex44_chain, is_mcd_monoid_sample, mcd, mcd_in_p, McdVerdict,
};
use powmon::monoid::family::{default_rank2_sample, ex44_monoid, rank2_monoid};
use powmon::monoid::{ex44_generators, Monoid, Rank1Monoid};
use powmon::powmon::{
    augment_indecomposable, divides_in_p, is_indecomposable, p_divisors, p_factorize, sumset,
    FinSet,
};
use powmon::verify::{run_verify_suite, VerifyOptions};
use powmon::Budget;

type Set = BTreeSet<i64>;
type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn budget() -> Budget {
    Budget::default()
}

// ---- integer oracles for numerical monoids ----

struct Num {
    gens: Vec<i64>,
    reach: Vec<bool>,
}

impl Num {
    fn new(gens: &[i64]) -> Self {
        let n = 400;
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for x in 1..=n {
            reach[x] = gens
                .iter()
                .any(|&g| g as usize <= x && reach[x - g as usize]);
        }
        Num {
            gens: gens.to_vec(),
            reach,
        }
    }

    fn member(&self, x: i64) -> bool {
        x >= 0 && self.reach[x as usize]
    }

    fn upto(&self, n: i64) -> Vec<i64> {
        (0..=n).filter(|&x| self.member(x)).collect()
    }

    fn monoid(&self) -> Rank1Monoid {
        Rank1Monoid::new(self.gens.iter().map(|&g| Rat::int(g)).collect()).unwrap()
    }

    /// Every coefficient vector `c` with `Σ c_i g_i = b`.
    fn coeff_vectors(&self, b: i64) -> Vec<Vec<u64>> {
        fn go(gens: &[i64], b: i64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            let Some((&g, rest)) = gens.split_first() else {
                if b == 0 {
                    out.push(cur.clone());
                }
                return;
            };
            for c in 0..=b / g {
                cur.push(c as u64);
                go(rest, b - c * g, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if b >= 0 {
            go(&self.gens, b, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }

    /// The largest `X` with `D + X ⊆ T`, when `D + X = T`.
    fn quotient(&self, d: &Set, t: &Set) -> Option<Set> {
        let d0 = *d.first().unwrap();
        let x: Set = t
            .iter()
            .map(|v| v - d0)
            .filter(|&x| self.member(x) && d.iter().all(|e| t.contains(&(e + x))))
            .collect();
        (!x.is_empty() && osum(d, &x) == *t).then_some(x)
    }

    fn is_p_atom(&self, a: &Set) -> bool {
        if *a == Set::from([0]) {
            return false;
        }
        let pool = self.upto(*a.last().unwrap());
        !subsets(&pool, pool.len()).into_iter().any(|b| {
            b != Set::from([0]) && self.quotient(&b, a).is_some_and(|c| c != Set::from([0]))
        })
    }
}

fn osum(a: &Set, b: &Set) -> Set {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x + y))
        .collect()
}

fn subsets(pool: &[i64], max: usize) -> Vec<Set> {
    (1u64..1 << pool.len())
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| {
            (0..pool.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| pool[i])
                .collect()
        })
        .collect()
}

fn rats(s: &Set) -> FinSet<Rat> {
    FinSet::new(s.iter().map(|&x| Rat::int(x))).unwrap()
}

fn ints(s: &FinSet<Rat>) -> Set {
    s.iter()
        .map(|x| x.to_integer().and_then(|n| n.to_i64()).expect("integer"))
        .collect()
}

fn random_set(pool: &[i64], sizes: std::ops::RangeInclusive<usize>, rng: &mut ChaCha8Rng) -> Set {
    let k = rng.gen_range(sizes).min(pool.len());
    pool.choose_multiple(rng, k).copied().collect()
}

fn corpus(num: &Num, n: usize, seed: u64) -> Vec<(Set, Set)> {
    let pool = num.upto(30);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                random_set(&pool, 1..=4, &mut rng),
                random_set(&pool, 1..=4, &mut rng),
            )
        })
        .collect()
}

// ---- criteria ----

fn c01_min_max() -> Verdict {
    let start = Instant::now();
    for (gens, seed) in [(&[1][..], 1), (&[2, 3][..], 2)] {
        let num = Num::new(gens);
        for (s, t) in corpus(&num, 1000, seed) {
            let c = &sumset(&rats(&s), &rats(&t));
            let lo = s.first().unwrap() + t.first().unwrap();
            let hi = s.last().unwrap() + t.last().unwrap();
            ensure(*c.min() == Rat::int(lo) && *c.max() == Rat::int(hi), || {
                format!("S={s:?} T={t:?} S+T={c}")
            })?;
            ensure(ints(c) == osum(&s, &t), || {
                format!("sumset of {s:?} and {t:?} is {c}")
            })?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("2 x 1000 pairs".into())
}

fn c02_size_bound() -> Verdict {
    let mut strict = 0;
    for (gens, seed) in [(&[1][..], 1), (&[2, 3][..], 2)] {
        let num = Num::new(gens);
        for (s, t) in corpus(&num, 1000, seed) {
            let n = sumset(&rats(&s), &rats(&t)).len();
            ensure(n + 1 >= s.len() + t.len(), || {
                format!("|{s:?} + {t:?}| = {n}")
            })?;
            if s.len() >= 2 {
                strict += 1;
                ensure(n > t.len(), || format!("|{s:?} + {t:?}| = {n} <= |T|"))?;
            }
        }
    }
    Ok(format!("2 x 1000 pairs, {strict} strict cases"))
}

fn c03_divisibility_witnesses() -> Verdict {
    let mut witnesses = 0;
    for (gens, seed) in [(&[1][..], 3), (&[2, 3][..], 4)] {
        let num = Num::new(gens);
        let m = num.monoid();
        let pool = num.upto(30);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..250 {
            let a = random_set(&pool, 1..=3, &mut rng);
            let b = if i % 2 == 0 {
                osum(&a, &random_set(&pool, 1..=3, &mut rng))
            } else {
                random_set(&pool, 1..=4, &mut rng)
            };
            let got = lib(divides_in_p(&rats(&a), &rats(&b), &m, &mut budget()))?;
            let expect = num.quotient(&a, &b);
            ensure(got.as_ref().map(ints) == expect, || {
                format!("{a:?} | {b:?}: library {got:?}, oracle {expect:?}")
            })?;
            let Some(w) = got else { continue };
            witnesses += 1;
            ensure(osum(&a, &ints(&w)) == b, || format!("{a:?} + {w} != {b:?}"))?;
            let (amin, bmin) = (*a.first().unwrap(), *b.first().unwrap());
            ensure(num.member(bmin - amin), || {
                format!("min {amin} does not divide min {bmin}")
            })?;
            if amin == bmin {
                ensure(a == b || a.len() < b.len(), || {
                    format!("{a:?} | {b:?} with equal minima")
                })?;
            }
        }
    }
    Ok(format!("500 instances, {witnesses} witnesses"))
}

fn c04_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    for gens in [&[2, 3][..], &[3, 4, 5]] {
        let num = Num::new(gens);
        let m = num.monoid();
        let oracle_atoms: Vec<Rat> = gens
            .iter()
            .filter(|&&g| num.coeff_vectors(g).len() == 1)
            .map(|&g| Rat::int(g))
            .collect();
        ensure(m.atoms() == oracle_atoms.as_slice(), || {
            format!("atoms {:?}", m.atoms())
        })?;
        for b in 0..=30 {
            let q = Rat::int(b);
            let mut bud = budget();
            let member = lib(m.member(&q, &mut bud))?;
            ensure(member == num.member(b), || format!("member({b})"))?;
            let mut got: Vec<Vec<u64>> = lib(m.factorizations(&q, &mut bud))?
                .iter()
                .map(|z| gens.iter().map(|&g| z.multiplicity(&Rat::int(g))).collect())
                .collect();
            got.sort();
            ensure(got == num.coeff_vectors(b), || {
                format!("factorizations({b}): {got:?}")
            })?;
            if member {
                let ds: Vec<Rat> = (0..=b)
                    .filter(|&d| num.member(d) && num.member(b - d))
                    .map(Rat::int)
                    .collect();
                ensure(lib(m.divisors(&q, &mut bud))? == ds, || {
                    format!("divisors({b})")
                })?;
            }
            let half = Rat::new(2 * b + 1, 2).unwrap();
            ensure(!lib(m.member(&half, &mut bud))?, || {
                format!("{half} reported a member")
            })?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok("elements 0..=30 of <2,3> and <3,4,5>".into())
}

fn c05_p_factorizations() -> Verdict {
    let start = Instant::now();
    let num = Num::new(&[2, 3]);
    let m = num.monoid();
    let pool = num.upto(12);
    let sets = subsets(&pool, 3);
    let mut longest = 0;
    for s in &sets {
        let parts = lib(p_factorize(&rats(s), &m, &mut budget()))?;
        let total = parts
            .iter()
            .fold(Set::from([0]), |acc, p| osum(&acc, &ints(p)));
        ensure(total == *s, || format!("parts of {s:?} sum to {total:?}"))?;
        for p in &parts {
            ensure(num.is_p_atom(&ints(p)), || {
                format!("{p} in the factorization of {s:?} is not an atom")
            })?;
        }
        longest = longest.max(parts.len());
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} sets, longest factorization {longest} atoms",
        sets.len()
    ))
}

fn c06_mcd_equivalence() -> Verdict {
    let mut families = 0;
    for gens in [&[2, 3][..], &[3, 4, 5]] {
        let num = Num::new(gens);
        let m = num.monoid();
        let pool = num.upto(10);
        let sets = subsets(&pool, 2);
        let mut m_level = true;
        for s in &sets {
            let cds: Vec<i64> = (0..=*s.first().unwrap())
                .filter(|&d| num.member(d) && s.iter().all(|&x| num.member(x - d)))
                .collect();
            let maximal: Vec<Rat> = cds
                .iter()
                .filter(|&&d| !cds.iter().any(|&e| e != d && num.member(e - d)))
                .map(|&d| Rat::int(d))
                .collect();
            let got = lib(mcd(&rats(s), &m, &mut budget()))?;
            ensure(got == maximal, || {
                format!("mcd {s:?}: {got:?}, oracle {maximal:?}")
            })?;
            m_level &= !got.is_empty();
        }
        let sweep = lib(is_mcd_monoid_sample(&m, 2, &Rat::int(10), &mut budget()))?;
        ensure(m_level == matches!(sweep, McdVerdict::Holds { .. }), || {
            format!("sweep: {sweep}")
        })?;
        let candidates = subsets(&pool, pool.len());
        let mut p_level = true;
        for i in 0..sets.len() {
            for j in i..sets.len() {
                let fam: Vec<&Set> = if i == j {
                    vec![&sets[i]]
                } else {
                    vec![&sets[i], &sets[j]]
                };
                let cds: Vec<&Set> = candidates
                    .iter()
                    .filter(|d| fam.iter().all(|t| num.quotient(d, t).is_some()))
                    .collect();
                let mut maximal: Vec<Set> = cds
                    .iter()
                    .filter(|d| !cds.iter().any(|e| e != *d && num.quotient(d, e).is_some()))
                    .map(|d| (*d).clone())
                    .collect();
                maximal.sort();
                let family: Vec<FinSet<Rat>> = fam.iter().map(|t| rats(t)).collect();
                let mut got: Vec<Set> = lib(mcd_in_p(&family, &m, &mut budget()))?
                    .iter()
                    .map(ints)
                    .collect();
                got.sort();
                ensure(got == maximal, || {
                    format!("mcd of {fam:?}: {got:?}, oracle {maximal:?}")
                })?;
                p_level &= !got.is_empty();
                families += 1;
            }
        }
        ensure(m_level == p_level, || {
            format!("<{gens:?}>: M-level {m_level}, P-level {p_level}")
        })?;
    }
    Ok(format!("{families} families; MCDs exist at both levels"))
}

fn c07_ex44() -> Verdict {
    let start = Instant::now();
    let depth = 6;
    let gens = ex44_generators(depth, 0).unwrap();
    let all = gens.all();
    let steps = lib(ex44_chain(3, depth, &mut budget()))?;
    let r = |n: i64, d: i64| Rat::new(n, d).unwrap();
    let values = chain_values(&steps);
    ensure(values == vec![r(0, 1), r(1, 2), r(3, 4), r(7, 8)], || {
        format!("chain {values:?}")
    })?;
    ensure(values.windows(2).all(|w| w[0] < w[1]), || {
        "chain is not ascending".into()
    })?;
    let (one, four_thirds) = (r(1, 1), r(4, 3));
    for s in &steps {
        ensure(s.verify(), || format!("step does not verify: {s}"))?;
        let next = s.next_q();
        let certs = [
            (&s.increment_certificate, s.increment.clone()),
            (&s.residual_certificates[0], &one - &next),
            (&s.residual_certificates[1], &four_thirds - &next),
        ];
        for (z, target) in certs {
            let total = z
                .parts()
                .iter()
                .fold(Rat::zero(), |acc, (a, c)| acc + a.mul_int(*c));
            ensure(total == target, || format!("{z} does not sum to {target}"))?;
            ensure(z.parts().iter().all(|(a, _)| all.contains(a)), || {
                format!("{z} uses a non-generator")
            })?;
        }
    }
    // n·(1/m) written out by hand
    let expected = [
        (&steps[0].increment_certificate, r(1, 26), 13, r(1, 2)),
        (&steps[0].residual_certificates[1], r(5, 66), 11, r(5, 6)),
        (&steps[1].increment_certificate, r(1, 76), 19, r(1, 4)),
        (&steps[1].residual_certificates[1], r(7, 204), 17, r(7, 12)),
    ];
    for (z, atom, count, value) in expected {
        ensure(
            z.parts() == [(atom.clone(), count)] && atom.mul_int(count) == value,
            || format!("expected {value} = {count}*({atom}), got {z}"),
        )?;
    }
    for d in 1..=depth {
        let g = ex44_generators(d, 0).unwrap();
        let m = lib(ex44_monoid(d, 0))?;
        let zs = lib(m.factorizations(&one, &mut budget()))?;
        ensure(!zs.is_empty(), || {
            format!("1 has no factorization at depth {d}")
        })?;
        for z in &zs {
            ensure(z.value() == one, || format!("{z} is not 1"))?;
            ensure(z.parts().iter().all(|(a, _)| !g.a2.contains(a)), || {
                format!("depth {d}: 1 = {z} uses A_2")
            })?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("0 < 1/2 < 3/4 < 7/8 certified; no A_2 atom divides 1 at depths 1..=6".into())
}

/// `(a, p)` with `p` dividing the denominator of `a` exactly once and no
/// other generator's denominator.
fn private_pairs(gens: &[Rat]) -> Vec<(Rat, u64)> {
    let odd_primes = |d: u64| {
        (3..=d)
            .step_by(2)
            .filter(move |p| d % p == 0 && (3..*p).all(|q| p % q != 0))
    };
    let den = |a: &Rat| a.denom().to_u64().unwrap();
    let mut out = Vec::new();
    for a in gens {
        for p in odd_primes(den(a)) {
            let private = den(a) % (p * p) != 0 && gens.iter().all(|g| g == a || den(g) % p != 0);
            if private {
                out.push((a.clone(), p));
            }
        }
    }
    out
}

fn brute_residue(q: &Rat, a: &Rat, p: u64) -> u64 {
    (0..p)
        .find(|&c| {
            (q - &a.mul_int(c))
                .denom()
                .to_u64()
                .map_or(true, |d| d % p != 0)
        })
        .expect("some residue clears p")
}

fn random_member(gens: &[Rat], max: u64, rng: &mut ChaCha8Rng) -> Rat {
    gens.iter().fold(Rat::zero(), |acc, g| {
        acc + g.mul_int(rng.gen_range(0..=max))
    })
}

fn c08_residues() -> Verdict {
    let m3 = lib(ex44_monoid(3, 0))?;
    let pairs = private_pairs(m3.generators());
    ensure(pairs.len() == 6, || format!("private pairs {pairs:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let q = random_member(m3.generators(), 4, &mut rng);
        let r = random_member(m3.generators(), 4, &mut rng);
        for (a, p) in &pairs {
            let c = |x: &Rat| cap_residue(x, a, *p, &m3).map(|c| c.residue);
            let (cq, cr, cs) = (lib(c(&q))?, lib(c(&r))?, lib(c(&(&q + &r)))?);
            ensure(cq == brute_residue(&q, a, *p), || format!("c({q}) for {a}"))?;
            ensure(cs == (cq + cr) % p, || {
                format!("c({q} + {r}) = {cs} for {a}")
            })?;
        }
    }
    let m2 = lib(ex44_monoid(2, 0))?;
    let pairs = private_pairs(m2.generators());
    let (mut constant, mut divisors) = (0, 0);
    for _ in 0..100 {
        let side = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=2);
            FinSet::new(
                (0..k)
                    .map(|_| random_member(m2.generators(), 2, rng))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let s = sumset(&side(&mut rng), &side(&mut rng));
        let ds = lib(p_divisors(&s, &*m2, &mut budget()))?;
        for (a, p) in &pairs {
            let res: BTreeSet<u64> = s.iter().map(|x| brute_residue(x, a, *p)).collect();
            if res.len() != 1 {
                continue;
            }
            constant += 1;
            for d in &ds {
                divisors += 1;
                let rd: BTreeSet<u64> = d.iter().map(|x| brute_residue(x, a, *p)).collect();
                ensure(rd.len() == 1, || {
                    format!("residue mod {p} of {a} constant on {s} but not on {d}")
                })?;
            }
        }
    }
    ensure(constant > 0, || "no constant residue sampled".into())?;
    Ok(format!(
        "500 pairs x 6 atoms; {constant} constant cases, {divisors} divisors"
    ))
}

/// Exhaustive: no `B + C = S` with `|B|, |C| >= 2` in N0.
fn oracle_indecomposable(s: &Set) -> bool {
    let s0 = *s.first().unwrap();
    let shifted: Set = s.iter().map(|x| x - s0).collect();
    let rest: Vec<i64> = shifted.iter().copied().filter(|&x| x > 0).collect();
    let n0 = Num::new(&[1]);
    !subsets(&rest, rest.len()).into_iter().any(|mut b| {
        b.insert(0);
        n0.quotient(&b, &shifted).is_some_and(|c| c.len() >= 2)
    })
}

fn c09_augment() -> Verdict {
    let start = Instant::now();
    let m = Num::new(&[1]).monoid();
    let pool: Vec<i64> = (1..=9).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let s = random_set(&pool, 2..=4, &mut rng);
        let t = lib(augment_indecomposable(&rats(&s)))?;
        ensure(oracle_indecomposable(&ints(&t)), || {
            format!("{t} decomposes")
        })?;
        ensure(lib(is_indecomposable(&t, &m, &mut budget()))?, || {
            format!("library decomposes {t}")
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("200 sets".into())
}

/// `(ell, [(p, c_p)])` by trying every coefficient vector.
fn brute_canonical(num: i64, primes: &[i64]) -> (i64, Vec<(u64, u64)>) {
    let den: i64 = primes.iter().product();
    let mut coeffs = vec![0i64; primes.len()];
    loop {
        let part: i64 = primes.iter().zip(&coeffs).map(|(p, c)| c * (den / p)).sum();
        if (num - part).rem_euclid(den) == 0 {
            let cs = primes
                .iter()
                .zip(&coeffs)
                .filter(|(_, &c)| c > 0)
                .map(|(&p, &c)| (p as u64, c as u64));
            return ((num - part) / den, cs.collect());
        }
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < primes[i] {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

fn c10_canonical() -> Verdict {
    let r = |s: &str| s.parse::<Rat>().unwrap();
    for (q, k) in [("7/3", 0), ("32/15", 1), ("38/15", 0)] {
        let got = lib(k_of(&r(q)))?;
        ensure(got == k, || format!("k({q}) = {got}"))?;
    }
    let primes = [3i64, 5, 7, 11, 13];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let used: Vec<i64> = primes
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let den: i64 = used.iter().product();
        let num = rng.gen_range(-2000..=2000);
        let q = Rat::new(num, den).unwrap();
        let d = lib(canonical_decomp_q(&q))?;
        ensure(d.reconstruct() == q, || {
            format!("{q} reconstructs to {}", d.reconstruct())
        })?;
        let (ell, coeffs) = brute_canonical(num, &used);
        let got: Vec<(u64, u64)> = d.coeffs.iter().map(|(&p, &c)| (p, c)).collect();
        ensure(d.ell == ell && got == coeffs, || {
            format!("{q}: {d}, oracle ell={ell} {coeffs:?}")
        })?;
    }
    Ok("k(7/3)=0, k(32/15)=1, k(38/15)=0; 1000 samples reconstruct".into())
}

fn band_rational(rng: &mut ChaCha8Rng) -> Rat {
    let primes = [3i64, 5, 7, 11, 13];
    loop {
        let den: i64 = primes
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.4))
            .product();
        if den == 1 {
            continue;
        }
        return Rat::new(2 * den + rng.gen_range(1..den), den).unwrap();
    }
}

fn c11_sum_witness() -> Verdict {
    let r = |s: &str| s.parse::<Rat>().unwrap();
    let pt = |x: &str, y: Rat| QPoint2::new(r(x), y);
    let w = lib(lemma54_sum_witness(
        &r("7/3"),
        &r("7/3"),
        (Branch::A, Branch::B),
        3,
    ))?;
    let left = [pt("1/5", r("10/3")), pt("1/7", r("10/3"))];
    let right = [
        pt("1/5", r("32/15") + r("1/2")),
        pt("1/7", r("38/15") + r("1")),
    ];
    let inc = pt("0", r("1/2"));
    ensure(w.p == 5, || format!("p = {}", w.p))?;
    ensure(
        w.left == left && w.right == right && w.increment == inc,
        || format!("witness {w}"),
    )?;
    let lhs = (&left[0].x + &left[1].x, &left[0].y + &left[1].y);
    let rhs = (
        &(&right[0].x + &right[1].x) + &inc.x,
        &(&right[0].y + &right[1].y) + &inc.y,
    );
    ensure(lhs == rhs, || format!("{lhs:?} != {rhs:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (q, s) = (band_rational(&mut rng), band_rational(&mut rng));
        let branches = (
            if rng.gen() { Branch::A } else { Branch::B },
            if rng.gen() { Branch::A } else { Branch::B },
        );
        let w = lib(lemma54_sum_witness(&q, &s, branches, 3))?;
        let step = Rat::recip_of(w.p);
        let (q2, s2) = (&q - &step, &s + &step);
        let atom = |v: &Rat, b: Branch| {
            let k = brute_k(v);
            let x = if b == Branch::A { r("1/5") } else { r("1/7") };
            QPoint2::new(x, v + &Rat::pow2(-k))
        };
        ensure(
            w.left == [atom(&q, branches.0), atom(&s, branches.1)],
            || format!("left side of {w}"),
        )?;
        ensure(
            w.right == [atom(&q2, branches.0), atom(&s2, branches.1)],
            || format!("right side of {w}"),
        )?;
        let rest = w.left[0].add(&w.left[1]).sub(&w.increment);
        ensure(rest == w.right[0].add(&w.right[1]), || {
            format!("identity fails for {w}")
        })?;
        ensure(
            w.increment.x.is_zero() && w.increment.y.is_positive(),
            || format!("increment of {w}"),
        )?;
        let mut sample = vec![q.clone(), s.clone(), q2, s2];
        sample.sort();
        sample.dedup();
        let m = lib(rank2_monoid(&sample, w.n.max(1) as u32))?;
        ensure(lib(m.member(&rest, &mut budget()))?, || {
            format!("{rest} not in the truncation for {w}")
        })?;
        ensure(m.generators().contains(&w.increment), || {
            format!("increment of {w} is not a generator")
        })?;
    }
    Ok("p=5 identity exact; 50 random pairs certified".into())
}

/// `k = 2 − ell` from the brute-force canonical decomposition.
fn brute_k(q: &Rat) -> i64 {
    let num = q.numer().to_i64().unwrap();
    let den = q.denom().to_i64().unwrap();
    let primes: Vec<i64> = (3..=den)
        .step_by(2)
        .filter(|p| den % p == 0 && (3..*p).all(|d| p % d != 0))
        .collect();
    2 - brute_canonical(num * (primes.iter().product::<i64>() / den), &primes).0
}

fn c12_projection() -> Verdict {
    let m = lib(rank2_monoid(&default_rank2_sample(), 3))?;
    let r = |s: &str| s.parse::<Rat>().unwrap();
    let allowed = [r("0"), r("1/5"), r("1/7")];
    let (gap, tiny) = (r("2/35"), r("1/35"));
    let bound = QPoint2::new(r("1"), r("8"));
    let pool = lib(m.members_below(&bound, &mut budget()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut atoms, mut tri, mut gaps, mut hits) = (0, 0, 0, 0);
    let mut first = None;
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let s = FinSet::new(
            pool.choose_multiple(&mut rng, k)
                .cloned()
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let parts = lib(p_factorize(&s, &*m, &mut budget()))?;
        atoms += parts.len();
        let mut sum = FinSet::zero();
        for p in &parts {
            if !allowed.contains(&p.min().x) {
                tri += 1;
                first.get_or_insert_with(|| {
                    format!("atom {p} of {s} has least first coordinate {}", p.min().x)
                });
            }
            sum = sumset(&sum, p);
        }
        let base = (&sum).min().x.clone();
        let offsets: BTreeSet<Rat> = sum.iter().map(|v| &v.x - &base).collect();
        if offsets.iter().any(|o| !o.is_zero() && *o < gap) {
            gaps += 1;
            first.get_or_insert_with(|| {
                format!("sum {sum} of the atoms of {s} has offsets {offsets:?}")
            });
        }
        if offsets.contains(&tiny) || offsets.contains(&-tiny.clone()) {
            hits += 1;
        }
    }
    let summary = format!(
        "100 sets, {atoms} atoms: {tri} trichotomy violations, {gaps} sums with an offset outside {{0}} u [2/35, inf), {hits} hitting 1/35"
    );
    if tri + gaps + hits == 0 {
        return Ok(summary);
    }
    Err(format!("{summary}; first: {}", first.unwrap_or_default()))
}

fn c13_furstenberg() -> Verdict {
    let num = Num::new(&[2, 3]);
    let m = num.monoid();
    let pool = num.upto(10);
    let (mut singleton, mut wide, mut checked) = (0, 0, 0);
    for s in subsets(&pool, 3) {
        if s == Set::from([0]) {
            continue;
        }
        let f = lib(p_furstenberg_divisor(&rats(&s), &m, &mut budget()))?;
        let (a, q) = (ints(&f.atom), ints(&f.quotient));
        ensure(osum(&a, &q) == s, || format!("{a:?} + {q:?} != {s:?}"))?;
        ensure(num.is_p_atom(&a), || {
            format!("{a:?} is not an atom (dividing {s:?})")
        })?;
        match f.branch {
            DivisorBranch::Singleton => singleton += 1,
            DivisorBranch::Wide => wide += 1,
        }
        checked += 1;
    }
    ensure(singleton > 0 && wide > 0, || {
        format!("branches: {singleton} singleton, {wide} wide")
    })?;
    let mut longest = 0;
    for b in 0..=30 {
        if !num.member(b) {
            continue;
        }
        let rep = lib(tidf_implies_atomic_check(&m, &Rat::int(b), &mut budget()))?;
        ensure(rep.holds(), || {
            format!("descent from {b} failed: {:?}", rep.failure)
        })?;
        let cap = (b + 1) / 2;
        ensure(rep.longest.1 <= cap as u64, || {
            format!("descent up to {b} took {} steps", rep.longest.1)
        })?;
        longest = longest.max(rep.longest.1);
    }
    Ok(format!(
        "{checked} sets ({singleton} singleton, {wide} wide); descents at most {longest} steps"
    ))
}

fn c14_full_run() -> Verdict {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let mut outputs = Vec::new();
    for workers in [1, 4, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        let report = lib(pool.install(|| run_verify_suite("all", &opts)))?;
        outputs.push((report.to_text(), report.to_json_lines()));
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
        "reports differ between runs".into()
    })?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "3 runs (1, 4, 4 workers) identical in {:.1?}",
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 14] = [
        ("min/max additivity of sumsets", c01_min_max),
        ("sumset size bound and strict growth", c02_size_bound),
        ("divisibility witnesses", c03_divisibility_witnesses),
        (
            "member/divisors/factorizations vs brute force",
            c04_oracle_equivalence,
        ),
        ("desk-scale p-factorizations", c05_p_factorizations),
        (
            "MCD existence in M and in the power monoid",
            c06_mcd_equivalence,
        ),
        ("EX44 witness chain", c07_ex44),
        ("residue additivity and constancy on divisors", c08_residues),
        ("augmented sets are indecomposable", c09_augment),
        ("canonical decomposition", c10_canonical),
        ("rank-2 sum witness", c11_sum_witness),
        ("projection trichotomy and 2/35 gap", c12_projection),
        ("Furstenberg divisors and atom descent", c13_furstenberg),
        ("full verify run is fast and deterministic", c14_full_run),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(format!(
                "panicked: {}",
                e.downcast_ref::<String>().cloned().unwrap_or_default()
            ))
        });
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{t:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
