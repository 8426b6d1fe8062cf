use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::padic::{inverse_mod, residue_mod};
use crate::arith::{is_prime, vp, PadicVal, Rat};
use crate::error::{Error, Result};
use crate::monoid::{Monoid, Rank1Monoid};
use crate::powmon::FinSet;

/// `residue (mod modulus)` with `modulus` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueClass {
    pub modulus: u64,
    pub residue: u64,
}

impl ResidueClass {
    pub fn add(self, other: ResidueClass) -> ResidueClass {
        debug_assert_eq!(self.modulus, other.modulus);
        ResidueClass {
            modulus: self.modulus,
            residue: (self.residue + other.residue) % self.modulus,
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Checks that `a` is the only generator whose denominator `p` divides
/// and that `v_p(a) = −1`.
fn check_private_prime(a: &Rat, p: u64, monoid: &Rank1Monoid) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if !monoid.generators().contains(a) {
        return Err(Error::invalid(format!("{a} is not a generator")));
    }
    if vp(p, a)? != PadicVal::Finite(-1) {
        return Err(Error::Unsupported(format!("v_{p}({a}) is not -1")));
    }
    let pb = BigInt::from(p);
    if let Some(g) = monoid
        .generators()
        .iter()
        .find(|g| *g != a && (g.denom() % &pb).is_zero())
    {
        return Err(Error::Unsupported(format!(
            "{p} also divides the denominator of generator {g}"
        )));
    }
    Ok(())
}

/// The number of copies of `a` in any expression of `q`, modulo `p`:
/// the unique `c ∈ [0, p − 1]` with `v_p(q − c·a) ≥ 0`.
pub fn cap_residue(q: &Rat, a: &Rat, p: u64, monoid: &Rank1Monoid) -> Result<ResidueClass> {
    check_private_prime(a, p, monoid)?;
    let qp = residue_mod(&q.mul_int(p), p)
        .ok_or_else(|| Error::invalid(format!("v_{p}({q}) < -1, so {q} is not in the monoid")))?;
    let ap = residue_mod(&a.mul_int(p), p).expect("v_p(a) = -1");
    let inv = inverse_mod(ap, p).expect("a·p is a unit mod p");
    Ok(ResidueClass {
        modulus: p,
        residue: ((qp as u128 * inv as u128) % p as u128) as u64,
    })
}

/// Whether [`cap_residue`] takes one value on all of `S`.
pub fn cap_constant_on(s: &FinSet<Rat>, a: &Rat, p: u64, monoid: &Rank1Monoid) -> Result<bool> {
    let first = cap_residue(s.min(), a, p, monoid)?;
    for x in s.iter().skip(1) {
        if cap_residue(x, a, p, monoid)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::family::ex44_monoid;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn residue_examples() {
        let m = ex44_monoid(1, 0).unwrap();
        let c = |q: &str, a: &str, p| cap_residue(&r(q), &r(a), p, &m).unwrap().residue;
        assert_eq!(c("4/3", "4/15", 5), 0);
        assert_eq!(c("4/15", "4/15", 5), 1);
        assert_eq!(c("1", "1/7", 7), 0);
        assert_eq!(c("8/15", "4/15", 5), 2);
    }

    #[test]
    fn preconditions() {
        let m = ex44_monoid(1, 0).unwrap();
        let deeper = ex44_monoid(2, 0).unwrap();
        assert!(matches!(
            cap_residue(&r("1"), &r("4/15"), 3, &deeper),
            Err(Error::Unsupported(_))
        ));
        assert!(cap_residue(&r("1"), &r("4/15"), 4, &m).is_err());
        let shared = Rank1Monoid::new(vec![r("1/5"), r("2/5")]).unwrap();
        assert!(matches!(
            cap_residue(&r("1"), &r("1/5"), 5, &shared),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn constancy_examples() {
        let m = ex44_monoid(1, 0).unwrap();
        let s: FinSet<Rat> = FinSet::new([r("4/3"), r("4/3") + r("1/7")]).unwrap();
        assert!(cap_constant_on(&s, &r("4/15"), 5, &m).unwrap());
        let s: FinSet<Rat> = FinSet::new([r("4/15"), r("8/15")]).unwrap();
        assert!(!cap_constant_on(&s, &r("4/15"), 5, &m).unwrap());
        assert!(cap_constant_on(&FinSet::singleton(r("1")), &r("4/15"), 5, &m).unwrap());
    }
}
