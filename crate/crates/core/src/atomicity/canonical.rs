use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::arith::padic::{residue_mod, small_prime_factors};
use crate::arith::{QPoint2, Rat};
use crate::error::{Error, Result};

/// `q = ell + Σ_p c_p/p` with every `c_p ∈ [0, p − 1]`, for `q` in the
/// group generated by the reciprocals of the odd primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecompQ {
    pub ell: i64,
    /// Odd prime `p` to `c_p`; only nonzero coefficients are stored.
    pub coeffs: BTreeMap<u64, u64>,
    /// `2 − ell`.
    pub k: i64,
}

impl CanonicalDecompQ {
    pub fn coeff(&self, p: u64) -> u64 {
        self.coeffs.get(&p).copied().unwrap_or(0)
    }

    pub fn reconstruct(&self) -> Rat {
        self.coeffs
            .iter()
            .fold(Rat::int(self.ell), |acc, (&p, &c)| {
                acc + Rat::recip_of(p).mul_int(c)
            })
    }
}

impl fmt::Display for CanonicalDecompQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ell={}", self.ell)?;
        for (p, c) in &self.coeffs {
            write!(f, " c{p}={c}")?;
        }
        write!(f, " k={}", self.k)
    }
}

pub fn canonical_decomp_q(q: &Rat) -> Result<CanonicalDecompQ> {
    let not_in_group = || Error::NotInGroup(q.to_string());
    let primes = small_prime_factors(q.denom())
        .ok_or_else(|| Error::Unsupported(format!("denominator of {q} is too large to factor")))?;
    if primes.contains(&2) {
        return Err(not_in_group());
    }
    let mut coeffs = BTreeMap::new();
    let mut rest = q.clone();
    for p in primes {
        let c = residue_mod(&q.mul_int(p), p).ok_or_else(not_in_group)?;
        if c > 0 {
            coeffs.insert(p, c);
            rest = rest - Rat::recip_of(p).mul_int(c);
        }
    }
    let ell = rest
        .to_integer()
        .ok_or_else(not_in_group)?
        .to_i64()
        .ok_or_else(|| Error::Unsupported(format!("{q} is too large")))?;
    Ok(CanonicalDecompQ {
        ell,
        coeffs,
        k: 2 - ell,
    })
}

/// `k(q)` for `q` in the group; see [`canonical_decomp_q`].
pub fn k_of(q: &Rat) -> Result<i64> {
    Ok(canonical_decomp_q(q)?.k)
}

/// Which first coordinate a rank-2 atom carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// First coordinate 1/5.
    A,
    /// First coordinate 1/7.
    B,
}

impl Branch {
    pub fn first_coordinate(self) -> Rat {
        match self {
            Branch::A => Rat::recip_of(5),
            Branch::B => Rat::recip_of(7),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "A",
            Branch::B => "B",
        })
    }
}

/// Checks that `q` lies in the group and strictly between 2 and 3.
pub fn check_in_open_band(q: &Rat) -> Result<CanonicalDecompQ> {
    let d = canonical_decomp_q(q)?;
    if !(*q > 2 && *q < 3) {
        return Err(Error::invalid(format!(
            "{q} is not strictly between 2 and 3"
        )));
    }
    Ok(d)
}

/// `(1/5, q + 2^{-k(q)})` on branch A, `(1/7, q + 2^{-k(q)})` on branch B.
pub fn rank2_atom(q: &Rat, branch: Branch) -> Result<QPoint2> {
    let d = check_in_open_band(q)?;
    Ok(QPoint2::new(
        branch.first_coordinate(),
        q + &Rat::pow2(-d.k),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn worked_examples() {
        let d = canonical_decomp_q(&r("7/3")).unwrap();
        assert_eq!((d.ell, d.coeff(3), d.k), (2, 1, 0));
        let d = canonical_decomp_q(&r("32/15")).unwrap();
        assert_eq!((d.ell, d.coeff(3), d.coeff(5), d.k), (1, 1, 4, 1));
        let d = canonical_decomp_q(&r("38/15")).unwrap();
        assert_eq!((d.ell, d.coeff(3), d.coeff(5), d.k), (2, 1, 1, 0));
    }

    #[test]
    fn outside_the_group() {
        assert!(matches!(
            canonical_decomp_q(&r("1/2")),
            Err(Error::NotInGroup(_))
        ));
        assert!(matches!(
            canonical_decomp_q(&r("1/9")),
            Err(Error::NotInGroup(_))
        ));
        let d = canonical_decomp_q(&r("-1/3")).unwrap();
        assert_eq!((d.ell, d.coeff(3)), (-1, 2));
    }

    #[test]
    fn atoms_of_both_branches() {
        assert_eq!(
            rank2_atom(&r("7/3"), Branch::A).unwrap().to_string(),
            "(1/5, 10/3)"
        );
        assert_eq!(
            rank2_atom(&r("7/3"), Branch::B).unwrap().to_string(),
            "(1/7, 10/3)"
        );
        assert_eq!(
            rank2_atom(&r("32/15"), Branch::A).unwrap(),
            QPoint2::new(r("1/5"), r("32/15") + r("1/2"))
        );
        assert!(rank2_atom(&r("10/3"), Branch::A).is_err());
    }
}
