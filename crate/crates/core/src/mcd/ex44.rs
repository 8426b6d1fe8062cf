use std::fmt;

use crate::arith::Rat;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::monoid::family::{ex44_generators, ex44_monoid};
use crate::monoid::{Factorization, Monoid};

/// One ascent step for the pair `{1, 4/3}`: `increment = 1/2^{n+1}` is a
/// positive common divisor of `{1 − q, 4/3 − q}`.
#[derive(Clone, PartialEq, Eq)]
pub struct McdWitnessStep {
    pub q: Rat,
    pub n: usize,
    pub increment: Rat,
    /// The factorization of `4/3 − q` the index `n` was read from.
    pub source: Factorization<Rat>,
    /// Factorizations of `1 − q − increment` and `4/3 − q − increment`.
    pub residual_certificates: [Factorization<Rat>; 2],
    /// A factorization of the increment itself.
    pub increment_certificate: Factorization<Rat>,
}

impl McdWitnessStep {
    pub fn next_q(&self) -> Rat {
        &self.q + &self.increment
    }

    /// Recheck every certificate by addition alone.
    pub fn verify(&self) -> bool {
        let one = Rat::one();
        let four_thirds = Rat::new(4, 3).expect("literal");
        let inc = &self.increment;
        self.source.value() == &four_thirds - &self.q
            && self.increment_certificate.value() == *inc
            && self.residual_certificates[0].value() == &(&one - &self.q) - inc
            && self.residual_certificates[1].value() == &(&four_thirds - &self.q) - inc
    }
}

impl fmt::Display for McdWitnessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let four_thirds = Rat::new(4, 3).expect("literal");
        let gap = &four_thirds - &self.q;
        write!(
            f,
            "q={} n={}: {} = {}; increment {} = {}; {} = {}; {} = {}",
            self.q,
            self.n,
            gap,
            self.source,
            self.increment,
            self.increment_certificate,
            self.residual_certificates[0].value(),
            self.residual_certificates[0],
            self.residual_certificates[1].value(),
            self.residual_certificates[1]
        )
    }
}

impl fmt::Debug for McdWitnessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn truncation(n: usize, depth: u32) -> Error {
    Error::Truncation {
        message: format!(
            "the witness needs atom index {} but depth is {depth}",
            n + 1
        ),
        achieved: 0,
    }
}

/// Given a common divisor `q` of `{1, 4/3}`, exhibits `1/2^{n+1}` as a
/// positive common divisor of `{1 − q, 4/3 − q}`, where `n` is the unique
/// index of a second-family atom in a factorization of `4/3 − q`.
pub fn ex44_witness(q: &Rat, depth: u32, budget: &mut Budget) -> Result<McdWitnessStep> {
    let gens = ex44_generators(depth, 0)?;
    let m = ex44_monoid(depth, 0)?;
    let one = Rat::one();
    let four_thirds = Rat::new(4, 3)?;
    if !m.divides(q, &one, budget)? {
        return Err(Error::invalid(format!(
            "{q} does not divide 1 in the truncation"
        )));
    }
    let rest = &four_thirds - q;
    let source = m
        .factorize_one(&rest, budget)?
        .ok_or_else(|| Error::invalid(format!("{q} does not divide 4/3 in the truncation")))?;
    let used: Vec<(usize, u64)> = source
        .parts()
        .iter()
        .filter_map(|(a, c)| gens.a2_index(a).map(|i| (i, *c)))
        .collect();
    let [(n, copies)] = used[..] else {
        return Err(Error::invalid(format!(
            "factorization {source} of {rest} does not use exactly one second-family atom"
        )));
    };
    if copies != gens.a2_primes[n] {
        return Err(Error::invalid(format!(
            "second-family atom {} appears {copies} times, not {}",
            gens.a2[n], gens.a2_primes[n]
        )));
    }
    if n + 1 >= depth as usize {
        return Err(truncation(n, depth));
    }
    let increment = Rat::pow2(-(n as i64 + 1));
    let cert = |x: &Rat, budget: &mut Budget| -> Result<Factorization<Rat>> {
        m.factorize_one(x, budget)?
            .ok_or_else(|| truncation(n, depth))
    };
    let increment_certificate = cert(&increment, budget)?;
    let a = cert(&(&(&one - q) - &increment), budget)?;
    let b = cert(&(&rest - &increment), budget)?;
    Ok(McdWitnessStep {
        q: q.clone(),
        n,
        increment,
        source,
        residual_certificates: [a, b],
        increment_certificate,
    })
}

/// `len` ascent steps starting from `q_0 = 0`, so the chain of common
/// divisors is `0 < 1/2 < … < 1 − 1/2^len`. Fails with the number of steps
/// achieved when the truncation is too shallow.
pub fn ex44_chain(len: usize, depth: u32, budget: &mut Budget) -> Result<Vec<McdWitnessStep>> {
    if len == 0 {
        return Err(Error::invalid("chain length must be at least 1"));
    }
    let mut steps: Vec<McdWitnessStep> = Vec::with_capacity(len);
    let mut q = Rat::zero();
    while steps.len() < len {
        match ex44_witness(&q, depth, budget) {
            Ok(step) => {
                q = step.next_q();
                steps.push(step);
            }
            Err(Error::Truncation { message, .. }) => {
                return Err(Error::Truncation {
                    message,
                    achieved: steps.len(),
                });
            }
            Err(e) => return Err(e.with_progress(steps.len())),
        }
    }
    Ok(steps)
}

/// The common divisors visited by a chain: `q_0, …, q_len`.
pub fn chain_values(steps: &[McdWitnessStep]) -> Vec<Rat> {
    let mut v: Vec<Rat> = steps.iter().map(|s| s.q.clone()).collect();
    if let Some(last) = steps.last() {
        v.push(last.next_q());
    }
    v
}
