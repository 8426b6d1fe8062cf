use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use super::canonical::{check_in_open_band, rank2_atom, Branch};
use crate::arith::{is_prime, QPoint2, Rat};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::monoid::Rank2Monoid;
use crate::powmon::{divides_in_p, is_p_atom, sum_all, sumset, FinSet};

const PRIME_SEARCH_LIMIT: u64 = 1_000_000;

/// `a_q + a_r = a_{q−1/p} + a_{r+1/p} + (0, 2^{-n})`.
#[derive(Clone, PartialEq, Eq)]
pub struct SumWitness {
    pub p: u64,
    pub q: Rat,
    pub r: Rat,
    pub branches: (Branch, Branch),
    pub left: [QPoint2; 2],
    pub right: [QPoint2; 2],
    /// `n = k(q) + 1`.
    pub n: i64,
    pub increment: QPoint2,
}

impl SumWitness {
    pub fn shifted(&self) -> (Rat, Rat) {
        let step = Rat::recip_of(self.p);
        (&self.q - &step, &self.r + &step)
    }

    /// Recomputes both sides from scratch.
    pub fn verify(&self) -> Result<bool> {
        let (q2, r2) = self.shifted();
        let right = [
            rank2_atom(&q2, self.branches.0)?,
            rank2_atom(&r2, self.branches.1)?,
        ];
        let lhs = self.left[0].add(&self.left[1]);
        let rhs = right[0].add(&right[1]).add(&self.increment);
        Ok(right == self.right
            && lhs == rhs
            && self.n >= 1
            && self.increment == QPoint2::new(Rat::zero(), Rat::pow2(-self.n)))
    }
}

impl fmt::Display for SumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={}: {} + {} = {} + {} + {}",
            self.p, self.left[0], self.left[1], self.right[0], self.right[1], self.increment
        )
    }
}

impl fmt::Debug for SumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shows the sum of two rank-2 atoms is divisible by a dyadic point on
/// the vertical axis. Uses the least odd prime `p >= prime_floor` with
/// `p` coprime to both denominators and `q − 1/p, r + 1/p` still in (2, 3).
pub fn lemma54_sum_witness(
    q: &Rat,
    r: &Rat,
    branches: (Branch, Branch),
    prime_floor: u64,
) -> Result<SumWitness> {
    let dq = check_in_open_band(q)?;
    check_in_open_band(r)?;
    let admissible = |p: u64| {
        let step = Rat::recip_of(p);
        dq.coeff(p) == 0
            && !(q.denom() % p).is_zero()
            && !(r.denom() % p).is_zero()
            && &(q - &step) > &Rat::int(2)
            && &(r + &step) < &Rat::int(3)
    };
    let p = (prime_floor.max(3)..PRIME_SEARCH_LIMIT)
        .filter(|&p| p % 2 == 1 && is_prime(p))
        .find(|&p| admissible(p))
        .ok_or_else(|| Error::invalid(format!("no admissible prime for {q} and {r}")))?;
    let step = Rat::recip_of(p);
    let left = [rank2_atom(q, branches.0)?, rank2_atom(r, branches.1)?];
    let right = [
        rank2_atom(&(q - &step), branches.0)?,
        rank2_atom(&(r + &step), branches.1)?,
    ];
    let n = dq.k + 1;
    Ok(SumWitness {
        p,
        q: q.clone(),
        r: r.clone(),
        branches,
        left,
        right,
        n,
        increment: QPoint2::new(Rat::zero(), Rat::pow2(-n)),
    })
}

/// What the first-coordinate projection looks like on a list of
/// power-monoid atoms and their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub atoms_checked: usize,
    /// Atoms whose least element has first coordinate outside {0, 1/5, 1/7}.
    pub trichotomy_violations: Vec<FinSet<QPoint2>>,
    /// `π(v) − π(min of the sum)` over all `v` in the sum.
    pub offsets: BTreeSet<Rat>,
    /// Offsets that are neither 0 nor at least 2/35.
    pub gap_violations: Vec<Rat>,
    /// Whether an offset of ±1/35 occurs.
    pub hits_one_35th: bool,
    /// Whether {(2/5, 20/3), (3/7, 10)} divides the sum.
    pub pair_divides_sum: bool,
}

impl ProjectionReport {
    pub fn holds(&self) -> bool {
        self.trichotomy_violations.is_empty()
            && self.gap_violations.is_empty()
            && !self.hits_one_35th
    }
}

pub fn forbidden_pair() -> FinSet<QPoint2> {
    FinSet::new(vec![
        QPoint2::new(Rat::new(2, 5).unwrap(), Rat::new(20, 3).unwrap()),
        QPoint2::new(Rat::new(3, 7).unwrap(), Rat::int(10)),
    ])
    .expect("nonempty")
}

/// Checks the projection trichotomy and offset gap on `atoms`. Sets
/// whose least element already breaks the trichotomy are reported without
/// further checks; every other set must be an atom of the power monoid.
pub fn thm55_projection_check(
    atoms: &[FinSet<QPoint2>],
    monoid: &Rank2Monoid,
    budget: &mut Budget,
) -> Result<ProjectionReport> {
    let allowed = [Rat::zero(), Rat::recip_of(5), Rat::recip_of(7)];
    let mut trichotomy_violations = Vec::new();
    let mut offsets = FinSet::singleton(Rat::zero());
    for a in atoms {
        let base = a.min().x.clone();
        if !allowed.contains(&base) {
            trichotomy_violations.push(a.clone());
            continue;
        }
        if !is_p_atom(a, monoid, budget)?.is_atom {
            return Err(Error::invalid(format!(
                "{a} is not an atom of the power monoid"
            )));
        }
        let own =
            FinSet::new(a.iter().map(|v| &v.x - &base).collect::<Vec<Rat>>()).expect("nonempty");
        offsets = sumset(&offsets, &own);
    }
    let gap = Rat::new(2, 35)?;
    let tiny = Rat::new(1, 35)?;
    let gap_violations: Vec<Rat> = offsets
        .iter()
        .filter(|o| !o.is_zero() && **o < gap)
        .cloned()
        .collect();
    let hits_one_35th = offsets.contains(&tiny) || offsets.contains(&-tiny);
    let pair_divides_sum = if atoms.is_empty() || !trichotomy_violations.is_empty() {
        false
    } else {
        divides_in_p(&forbidden_pair(), &sum_all(atoms), monoid, budget)?.is_some()
    };
    Ok(ProjectionReport {
        atoms_checked: atoms.len(),
        trichotomy_violations,
        offsets: offsets.iter().cloned().collect(),
        gap_violations,
        hits_one_35th,
        pair_divides_sum,
    })
}
