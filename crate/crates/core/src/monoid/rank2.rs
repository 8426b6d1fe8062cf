use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::RwLock;

use super::{Factorization, Monoid, Rank1Search};
use crate::arith::{QPoint2, Rat};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Search over lexicographically positive points (priority on `y`).
///
/// Points split into three groups: the `x`-axis (`y = 0`), the `y`-axis
/// (`x = 0`) and the rest. Coefficients of the rest are capped by the
/// remaining `y`; what is left must then be an `x`-axis member plus a
/// `y`-axis member, two independent rank-1 questions.
pub(crate) struct Rank2Search {
    mixed: Vec<QPoint2>,
    xaxis: Rank1Search,
    yaxis: Rank1Search,
    signed_x: bool,
    /// Membership answers with the node count of the search that found them;
    /// a hit is charged the same count so accounting ignores cache state.
    memo: RwLock<HashMap<QPoint2, (bool, u64)>>,
}

impl Rank2Search {
    pub(crate) fn new(points: &[QPoint2]) -> Self {
        let mut mixed = Vec::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for p in points {
            if p.y.is_zero() {
                xs.push(p.x.clone());
            } else if p.x.is_zero() {
                ys.push(p.y.clone());
            } else {
                mixed.push(p.clone());
            }
        }
        mixed.sort_by(|a, b| b.cmp(a));
        let signed_x = mixed.iter().any(|p| p.x.is_negative());
        Rank2Search {
            mixed,
            xaxis: Rank1Search::new(&xs),
            yaxis: Rank1Search::new(&ys),
            signed_x,
            memo: RwLock::new(HashMap::new()),
        }
    }

    fn cap(&self, g: &QPoint2, rest: &QPoint2) -> u64 {
        let by_y = rest.y.quotient_floor(&g.y);
        if self.signed_x {
            by_y
        } else {
            by_y.min(rest.x.quotient_floor(&g.x))
        }
    }

    fn out_of_range(&self, q: &QPoint2) -> bool {
        q.y.is_negative() || (!self.signed_x && q.x.is_negative())
    }

    pub(crate) fn member(&self, q: &QPoint2, budget: &mut Budget) -> Result<bool> {
        if self.out_of_range(q) {
            return Ok(false);
        }
        if q.is_zero() {
            return Ok(true);
        }
        if let Some(&(hit, cost)) = self.memo.read().unwrap().get(q) {
            budget.charge(cost)?;
            return Ok(hit);
        }
        let mut dead = HashSet::new();
        let before = budget.used();
        let found = self.reach(0, q.clone(), &mut dead, budget)?;
        self.memo
            .write()
            .unwrap()
            .insert(q.clone(), (found, budget.used() - before));
        Ok(found)
    }

    fn reach(
        &self,
        i: usize,
        rest: QPoint2,
        dead: &mut HashSet<(usize, QPoint2)>,
        budget: &mut Budget,
    ) -> Result<bool> {
        budget.tick()?;
        if i == self.mixed.len() {
            return Ok(!rest.x.is_negative()
                && self.xaxis.member(&rest.x, budget)?
                && self.yaxis.member(&rest.y, budget)?);
        }
        if dead.contains(&(i, rest.clone())) {
            return Ok(false);
        }
        let g = &self.mixed[i];
        let mut cur = rest.clone();
        for _ in 0..=self.cap(g, &rest) {
            if self.reach(i + 1, cur.clone(), dead, budget)? {
                return Ok(true);
            }
            cur = cur.sub(g);
        }
        dead.insert((i, rest));
        Ok(false)
    }

    /// All factorizations of `q` over the search points.
    pub(crate) fn factorizations(
        &self,
        q: &QPoint2,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<Vec<Factorization<QPoint2>>> {
        let mut out = Vec::new();
        if self.out_of_range(q) {
            return Ok(out);
        }
        let mut coeffs = vec![0u64; self.mixed.len()];
        self.collect(0, q.clone(), &mut coeffs, &mut out, limit, budget)
            .map_err(|e| e.with_progress(out.len()))?;
        out.sort();
        Ok(out)
    }

    fn collect(
        &self,
        i: usize,
        rest: QPoint2,
        coeffs: &mut Vec<u64>,
        out: &mut Vec<Factorization<QPoint2>>,
        limit: Option<usize>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        if limit.is_some_and(|l| out.len() >= l) {
            return Ok(());
        }
        if i == self.mixed.len() {
            if rest.x.is_negative() {
                return Ok(());
            }
            let remaining = limit.map(|l| l - out.len());
            let xs = self.xaxis.solutions(&rest.x, remaining, budget)?;
            if xs.is_empty() {
                return Ok(());
            }
            let ys = self.yaxis.solutions(&rest.y, remaining, budget)?;
            for xc in &xs {
                for yc in &ys {
                    if limit.is_some_and(|l| out.len() >= l) {
                        return Ok(());
                    }
                    budget.tick()?;
                    let parts = self
                        .mixed
                        .iter()
                        .cloned()
                        .zip(coeffs.iter().copied())
                        .chain(
                            self.xaxis
                                .elems()
                                .iter()
                                .map(|x| QPoint2::new(x.clone(), Rat::zero()))
                                .zip(xc.iter().copied()),
                        )
                        .chain(
                            self.yaxis
                                .elems()
                                .iter()
                                .map(|y| QPoint2::new(Rat::zero(), y.clone()))
                                .zip(yc.iter().copied()),
                        );
                    out.push(Factorization::new(parts));
                }
            }
            return Ok(());
        }
        let g = self.mixed[i].clone();
        let mut cur = rest.clone();
        for c in 0..=self.cap(&g, &rest) {
            coeffs[i] = c;
            self.collect(i + 1, cur.clone(), coeffs, out, limit, budget)?;
            cur = cur.sub(&g);
        }
        coeffs[i] = 0;
        Ok(())
    }

    /// Members `m` with `0 ≤ m ≤ bound` coordinatewise.
    pub(crate) fn members_below(
        &self,
        bound: &QPoint2,
        budget: &mut Budget,
    ) -> Result<Vec<QPoint2>> {
        if self.signed_x {
            return Err(Error::Unsupported(
                "coordinatewise enumeration needs generators with x ≥ 0".into(),
            ));
        }
        let mut out = BTreeSet::new();
        if bound.x.is_negative() || bound.y.is_negative() {
            return Ok(Vec::new());
        }
        let mut stack = vec![(0usize, QPoint2::zero())];
        while let Some((i, acc)) = stack.pop() {
            budget.tick().map_err(|e| e.with_progress(out.len()))?;
            if i < self.mixed.len() {
                let g = &self.mixed[i];
                let mut v = acc;
                while v.dominated_by(bound) {
                    stack.push((i + 1, v.clone()));
                    v = v.add(g);
                }
                continue;
            }
            let xs = self.xaxis.members_below(&(&bound.x - &acc.x), budget)?;
            let ys = self.yaxis.members_below(&(&bound.y - &acc.y), budget)?;
            for x in &xs {
                for y in &ys {
                    out.insert(QPoint2::new(&acc.x + x, &acc.y + y));
                }
            }
            budget.charge((xs.len() * ys.len()) as u64)?;
        }
        Ok(out.into_iter().collect())
    }

    pub(crate) fn divisors(&self, b: &QPoint2, budget: &mut Budget) -> Result<Vec<QPoint2>> {
        if !self.member(b, budget)? {
            return Err(Error::invalid(format!("{b} is not in the monoid")));
        }
        if self.signed_x {
            let mut out = BTreeSet::new();
            for z in self.factorizations(b, None, budget)? {
                z.for_each_subsum(|d| {
                    out.insert(d.clone());
                    true
                });
            }
            return Ok(out.into_iter().collect());
        }
        let mut out = Vec::new();
        for d in self.members_below(b, budget)? {
            if self.member(&b.sub(&d), budget)? {
                out.push(d);
            }
        }
        Ok(out)
    }
}

/// A submonoid of `Q²` generated by finitely many lexicographically
/// positive points, ordered with priority on the second coordinate.
pub struct Rank2Monoid {
    generators: Vec<QPoint2>,
    atoms: Vec<QPoint2>,
    truncated: bool,
    search: Rank2Search,
}

impl Rank2Monoid {
    pub fn new(generators: Vec<QPoint2>) -> Result<Self> {
        Self::build(generators, false)
    }

    pub fn truncation(generators: Vec<QPoint2>) -> Result<Self> {
        Self::build(generators, true)
    }

    fn build(mut generators: Vec<QPoint2>, truncated: bool) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| !g.is_positive()) {
            return Err(Error::invalid(format!(
                "generator {bad} is not lexicographically positive"
            )));
        }
        if let Some(bad) = generators
            .iter()
            .find(|g| g.y.is_zero() && g.x.is_negative())
        {
            return Err(Error::invalid(format!("generator {bad} is not positive")));
        }
        generators.sort();
        generators.dedup();
        let mut atoms = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let others: Vec<QPoint2> = generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| h.clone())
                .collect();
            if !Rank2Search::new(&others).member(g, &mut Budget::default())? {
                atoms.push(g.clone());
            }
        }
        let search = Rank2Search::new(&atoms);
        Ok(Rank2Monoid {
            generators,
            atoms,
            truncated,
            search,
        })
    }
}

impl Monoid for Rank2Monoid {
    type Elem = QPoint2;

    fn generators(&self) -> &[QPoint2] {
        &self.generators
    }

    fn atoms(&self) -> &[QPoint2] {
        &self.atoms
    }

    fn is_truncated(&self) -> bool {
        self.truncated
    }

    fn member(&self, q: &QPoint2, budget: &mut Budget) -> Result<bool> {
        self.search.member(q, budget)
    }

    fn factorizations(
        &self,
        b: &QPoint2,
        budget: &mut Budget,
    ) -> Result<Vec<Factorization<QPoint2>>> {
        self.search.factorizations(b, None, budget)
    }

    fn factorize_one(
        &self,
        b: &QPoint2,
        budget: &mut Budget,
    ) -> Result<Option<Factorization<QPoint2>>> {
        Ok(self.search.factorizations(b, Some(1), budget)?.pop())
    }

    fn divisors(&self, b: &QPoint2, budget: &mut Budget) -> Result<Vec<QPoint2>> {
        self.search.divisors(b, budget)
    }

    fn members_below(&self, bound: &QPoint2, budget: &mut Budget) -> Result<Vec<QPoint2>> {
        self.search.members_below(bound, budget)
    }
}
