use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Factorization, Monoid};
use crate::arith::{lcm_of_denominators, Rat};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Largest scaled integer for which the reachability table is used.
const TABLE_LIMIT: usize = 1 << 22;

/// Membership and factorization search over a fixed list of positive
/// rationals (not necessarily atoms).
///
/// Elements are eliminated one at a time. At level `i` the remaining target
/// `t` must land in `(1/L)Z` where `L` is the lcm of the denominators still
/// to come, which pins the coefficient of element `i` to a residue class.
/// When all denominators divide a small lcm a reachability table over the
/// scaled integers answers membership directly.
pub(crate) struct Rank1Search {
    elems: Vec<Rat>,
    suffix_lcm: Vec<BigInt>,
    scaled: Option<Vec<usize>>,
    table: RwLock<Vec<bool>>,
    /// Membership answers with the node count of the search that found them;
    /// a hit is charged the same count so accounting ignores cache state.
    memo: RwLock<HashMap<Rat, (bool, u64)>>,
}

fn odd_prime_count(d: &BigInt) -> usize {
    crate::arith::padic::small_prime_factors(d)
        .map(|ps| ps.into_iter().filter(|&p| p != 2).count())
        .unwrap_or(0)
}

impl Rank1Search {
    pub(crate) fn new(values: &[Rat]) -> Self {
        let mut elems: Vec<Rat> = values.to_vec();
        elems.sort_by(|a, b| {
            odd_prime_count(b.denom())
                .cmp(&odd_prime_count(a.denom()))
                .then_with(|| b.denom().cmp(a.denom()))
                .then_with(|| b.cmp(a))
        });
        let n = elems.len();
        let mut suffix_lcm = vec![BigInt::one(); n + 1];
        for i in (0..n).rev() {
            suffix_lcm[i] = suffix_lcm[i + 1].lcm(elems[i].denom());
        }
        let scale = &suffix_lcm[0];
        let scaled = elems
            .iter()
            .map(|g| {
                (g.numer() * (scale / g.denom()))
                    .to_usize()
                    .filter(|&v| v <= TABLE_LIMIT)
            })
            .collect::<Option<Vec<usize>>>();
        Rank1Search {
            elems,
            suffix_lcm,
            scaled,
            table: RwLock::new(Vec::new()),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn elems(&self) -> &[Rat] {
        &self.elems
    }

    fn scale(&self) -> &BigInt {
        &self.suffix_lcm[0]
    }

    /// `q` scaled to an integer, or `None` when `q` cannot be a member
    /// because its denominator does not divide the scale.
    fn scaled_target(&self, q: &Rat) -> Option<BigInt> {
        let s = self.scale();
        if !(s % q.denom()).is_zero() {
            return None;
        }
        Some(q.numer() * (s / q.denom()))
    }

    fn table_index(&self, t: &BigInt) -> Option<usize> {
        self.scaled.as_ref()?;
        t.to_usize().filter(|&v| v <= TABLE_LIMIT)
    }

    fn ensure_table(&self, upto: usize) {
        if self.table.read().unwrap().len() > upto {
            return;
        }
        let gens = self.scaled.as_ref().expect("table requires scaled values");
        let mut table = self.table.write().unwrap();
        let old = table.len();
        if old > upto {
            return;
        }
        let new_len = (upto + 1).max(old * 2).min(TABLE_LIMIT + 1);
        table.resize(new_len, false);
        table[0] = true;
        for t in old.max(1)..new_len {
            table[t] = gens.iter().any(|&g| g <= t && table[t - g]);
        }
    }

    fn table_lookup(&self, idx: usize) -> bool {
        self.ensure_table(idx);
        self.table.read().unwrap()[idx]
    }

    pub(crate) fn member(&self, q: &Rat, budget: &mut Budget) -> Result<bool> {
        if q.is_negative() {
            return Ok(false);
        }
        if q.is_zero() {
            return Ok(true);
        }
        let Some(t) = self.scaled_target(q) else {
            return Ok(false);
        };
        if self.elems.is_empty() {
            return Ok(false);
        }
        budget.tick()?;
        if let Some(idx) = self.table_index(&t) {
            return Ok(self.table_lookup(idx));
        }
        if let Some(&(hit, cost)) = self.memo.read().unwrap().get(q) {
            budget.charge(cost)?;
            return Ok(hit);
        }
        let before = budget.used();
        let found = !self.solutions(q, Some(1), budget)?.is_empty();
        self.memo
            .write()
            .unwrap()
            .insert(q.clone(), (found, budget.used() - before));
        Ok(found)
    }

    /// Coefficient vectors (indexed like `elems`) summing to `q`, at most
    /// `limit` of them when a limit is given.
    pub(crate) fn solutions(
        &self,
        q: &Rat,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<Vec<Vec<u64>>> {
        if q.is_negative() || self.scaled_target(q).is_none() {
            return Ok(Vec::new());
        }
        let mut walk = Walk {
            search: self,
            coeffs: vec![0; self.elems.len()],
            found: Vec::new(),
            limit,
            dead: HashSet::new(),
        };
        match walk.descend(0, q.clone(), budget) {
            Ok(_) => Ok(walk.found),
            Err(e) => Err(e.with_progress(walk.found.len())),
        }
    }

    /// All members `m` with `0 ≤ m ≤ bound`, ascending.
    pub(crate) fn members_below(&self, bound: &Rat, budget: &mut Budget) -> Result<Vec<Rat>> {
        if bound.is_negative() {
            return Ok(Vec::new());
        }
        let scale = self.scale().clone();
        if self.scaled.is_some() {
            let top = bound.mul_int(scale.clone()).floor();
            if let Some(top) = top.to_usize().filter(|&v| v <= TABLE_LIMIT) {
                budget.charge(top as u64 + 1)?;
                self.ensure_table(top);
                let table = self.table.read().unwrap();
                return Ok((0..=top)
                    .filter(|&i| table[i])
                    .map(|i| Rat::new(i, scale.clone()).expect("nonzero scale"))
                    .collect());
            }
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![(0usize, Rat::zero())];
        while let Some((i, acc)) = stack.pop() {
            budget.tick().map_err(|e| e.with_progress(out.len()))?;
            if i == self.elems.len() {
                out.insert(acc);
                continue;
            }
            let g = &self.elems[i];
            let mut v = acc;
            while &v <= bound {
                stack.push((i + 1, v.clone()));
                v = &v + g;
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `{d ∈ M : d | b}` for a member `b`.
    pub(crate) fn divisors(&self, b: &Rat, budget: &mut Budget) -> Result<Vec<Rat>> {
        if !self.member(b, budget)? {
            return Err(Error::invalid(format!("{b} is not in the monoid")));
        }
        let t = self
            .scaled_target(b)
            .expect("members have admissible denominators");
        if let Some(top) = self.table_index(&t) {
            budget.charge(top as u64 + 1)?;
            self.ensure_table(top);
            let table = self.table.read().unwrap();
            let scale = self.scale().clone();
            return Ok((0..=top)
                .filter(|&i| table[i] && table[top - i])
                .map(|i| Rat::new(i, scale.clone()).expect("nonzero scale"))
                .collect());
        }
        let sols = self.solutions(b, None, budget)?;
        let mut out = BTreeSet::new();
        for s in &sols {
            let z = Factorization::new(self.elems.iter().cloned().zip(s.iter().copied()));
            let mut charged = Ok(());
            z.for_each_subsum(|d| {
                charged = budget.tick();
                out.insert(d.clone());
                charged.is_ok()
            });
            charged.map_err(|e| e.with_progress(out.len()))?;
        }
        Ok(out.into_iter().collect())
    }
}

struct Walk<'a> {
    search: &'a Rank1Search,
    coeffs: Vec<u64>,
    found: Vec<Vec<u64>>,
    limit: Option<usize>,
    dead: HashSet<(usize, Rat)>,
}

impl Walk<'_> {
    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    /// Returns whether any solution was found below this node.
    fn descend(&mut self, i: usize, t: Rat, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if t.is_zero() {
            self.found.push(self.coeffs.clone());
            return Ok(true);
        }
        let n = self.search.elems.len();
        if i == n || self.dead.contains(&(i, t.clone())) {
            return Ok(false);
        }
        let g = self.search.elems[i].clone();
        if i + 1 == n {
            let c = t.div(&g)?;
            return match c.to_integer().and_then(|c| c.to_u64()) {
                Some(c) => {
                    self.coeffs[i] = c;
                    self.found.push(self.coeffs.clone());
                    self.coeffs[i] = 0;
                    Ok(true)
                }
                None => Ok(false),
            };
        }
        let max_c = t.quotient_floor(&g);
        let mut any = false;
        if let Some((start, step)) = residue_class(&t, &g, &self.search.suffix_lcm[i + 1]) {
            let mut c = start;
            while c <= max_c {
                self.coeffs[i] = c;
                let rest = &t - &g.mul_int(c);
                if self.descend(i + 1, rest, budget)? {
                    any = true;
                }
                if self.full() {
                    break;
                }
                match c.checked_add(step) {
                    Some(next) => c = next,
                    None => break,
                }
            }
            self.coeffs[i] = 0;
        }
        if !any && !self.full() {
            self.dead.insert((i, t));
        }
        Ok(any)
    }
}

/// Least `c ≥ 0` and period `m` such that `t − c·g ∈ (1/l)Z` exactly when
/// `c ≡ start (mod m)`; `None` when no coefficient works.
fn residue_class(t: &Rat, g: &Rat, l: &BigInt) -> Option<(u64, u64)> {
    let x = t.mul_int(l.clone());
    let y = g.mul_int(l.clone());
    let (a, b) = (x.numer(), x.denom());
    let (u, w) = (y.numer(), y.denom());
    let d = b.lcm(w);
    let big_a = a * (&d / b);
    let big_u = u * (&d / w);
    let h = big_u.gcd(&d);
    if !(&big_a % &h).is_zero() {
        return None;
    }
    let m = &d / &h;
    if m.is_one() {
        return Some((0, 1));
    }
    let ua = (&big_u / &h).mod_floor(&m);
    let aa = (&big_a / &h).mod_floor(&m);
    let e = ua.extended_gcd(&m);
    let inv = e.x.mod_floor(&m);
    let start = (aa * inv).mod_floor(&m);
    let start = start.to_u64()?;
    let step = m.to_u64().unwrap_or(u64::MAX);
    Some((start, step))
}

/// A Puiseux monoid given by a finite generating set of positive rationals.
pub struct Rank1Monoid {
    generators: Vec<Rat>,
    atoms: Vec<Rat>,
    truncated: bool,
    search: Rank1Search,
}

impl Rank1Monoid {
    pub fn new(generators: Vec<Rat>) -> Result<Self> {
        Self::build(generators, false)
    }

    /// A finite truncation of an infinitely generated monoid; negative
    /// answers only hold within the truncation.
    pub fn truncation(generators: Vec<Rat>) -> Result<Self> {
        Self::build(generators, true)
    }

    fn build(mut generators: Vec<Rat>, truncated: bool) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| !g.is_positive()) {
            return Err(Error::invalid(format!("generator {bad} is not positive")));
        }
        generators.sort();
        generators.dedup();
        let atoms = atoms_of(&generators)?;
        let search = Rank1Search::new(&atoms);
        Ok(Rank1Monoid {
            generators,
            atoms,
            truncated,
            search,
        })
    }

    /// Lcm of the generator denominators; every member lies in `(1/L)Z`.
    pub fn denominator_lcm(&self) -> BigInt {
        lcm_of_denominators(&self.generators)
    }
}

/// Generators that are not sums of the others. A generator whose
/// denominator has a prime factor shared with no other generator is an
/// atom without search.
fn atoms_of(gens: &[Rat]) -> Result<Vec<Rat>> {
    let mut atoms = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let others: Vec<Rat> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h.clone())
            .collect();
        if has_private_prime(g, &others) {
            atoms.push(g.clone());
            continue;
        }
        let sub = Rank1Search::new(&others);
        if !sub.member(g, &mut Budget::default())? {
            atoms.push(g.clone());
        }
    }
    Ok(atoms)
}

fn has_private_prime(g: &Rat, others: &[Rat]) -> bool {
    let Some(primes) = crate::arith::padic::small_prime_factors(g.denom()) else {
        return false;
    };
    primes.into_iter().any(|p| {
        let p = BigInt::from(p);
        others.iter().all(|h| !(h.denom() % &p).is_zero())
    })
}

impl Monoid for Rank1Monoid {
    type Elem = Rat;

    fn generators(&self) -> &[Rat] {
        &self.generators
    }

    fn atoms(&self) -> &[Rat] {
        &self.atoms
    }

    fn is_truncated(&self) -> bool {
        self.truncated
    }

    fn member(&self, q: &Rat, budget: &mut Budget) -> Result<bool> {
        self.search.member(q, budget)
    }

    fn factorizations(&self, b: &Rat, budget: &mut Budget) -> Result<Vec<Factorization<Rat>>> {
        let sols = self.search.solutions(b, None, budget)?;
        let mut out: Vec<Factorization<Rat>> = sols
            .iter()
            .map(|c| Factorization::new(self.search.elems().iter().cloned().zip(c.iter().copied())))
            .collect();
        out.sort();
        Ok(out)
    }

    fn factorize_one(&self, b: &Rat, budget: &mut Budget) -> Result<Option<Factorization<Rat>>> {
        let sols = self.search.solutions(b, Some(1), budget)?;
        Ok(sols.first().map(|c| {
            Factorization::new(self.search.elems().iter().cloned().zip(c.iter().copied()))
        }))
    }

    fn divisors(&self, b: &Rat, budget: &mut Budget) -> Result<Vec<Rat>> {
        self.search.divisors(b, budget)
    }

    fn members_below(&self, bound: &Rat, budget: &mut Budget) -> Result<Vec<Rat>> {
        self.search.members_below(bound, budget)
    }
}
