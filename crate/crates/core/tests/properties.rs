use std::collections::BTreeSet;

use proptest::prelude::*;

use powmon::arith::{QPoint2, Rat};
use powmon::atomicity::canonical_decomp_q;
use powmon::monoid::{FamilySpec, FamilyTag, Monoid, MonoidSpec, Rank1Monoid};
use powmon::powmon::{divides_in_p, is_p_atom, p_factorize, sum_all, sumset, FinSet};
use powmon::Budget;

fn rats(v: &BTreeSet<i64>) -> FinSet<Rat> {
    FinSet::new(v.iter().map(|&n| Rat::int(n))).unwrap()
}

fn small_set(max: i64, size: usize) -> impl Strategy<Value = BTreeSet<i64>> {
    prop::collection::btree_set(0..=max, 1..=size)
}

/// Members of the numerical monoid generated by `gens`, up to `n`, by
/// plain reachability.
fn numerical_members(gens: &[i64], n: i64) -> Vec<bool> {
    let mut reach = vec![false; n as usize + 1];
    reach[0] = true;
    for x in 1..=n {
        reach[x as usize] = gens.iter().any(|&g| g <= x && reach[(x - g) as usize]);
    }
    reach
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn finset_round_trip(v in small_set(40, 6), den in 1i64..12) {
        let s = FinSet::new(v.iter().map(|&n| Rat::new(n, den).unwrap())).unwrap();
        prop_assert_eq!(s.to_string().parse::<FinSet<Rat>>().unwrap(), s);
    }

    #[test]
    fn planar_finset_round_trip(v in prop::collection::btree_set((0i64..9, -9i64..9, 1i64..6), 1..5)) {
        let s = FinSet::new(v.iter().map(|&(x, y, d)| QPoint2::new(Rat::int(x), Rat::new(y, d).unwrap()))).unwrap();
        prop_assert_eq!(s.to_string().parse::<FinSet<QPoint2>>().unwrap(), s);
    }

    #[test]
    fn spec_round_trip(gens in prop::collection::btree_set(1i64..40, 1..5), den in 1i64..9) {
        let spec = MonoidSpec::puiseux(gens.iter().map(|&g| Rat::new(g, den).unwrap()).collect()).unwrap();
        prop_assert_eq!(MonoidSpec::parse(&spec.render()).unwrap(), spec);
    }

    #[test]
    fn family_spec_round_trip(depth in 1u32..8, offset in 0usize..4, tag in 0usize..3) {
        let tag = [FamilyTag::Ex44, FamilyTag::OddPrimes, FamilyTag::Rank2Sample][tag];
        let mut fam = FamilySpec::new(tag, depth);
        if tag == FamilyTag::Ex44 {
            fam.offset = offset;
        }
        let spec = MonoidSpec::family(fam).unwrap();
        prop_assert_eq!(MonoidSpec::parse(&spec.render()).unwrap(), spec);
    }

    #[test]
    fn sumset_is_a_commutative_monoid(a in small_set(20, 4), b in small_set(20, 4), c in small_set(20, 4)) {
        let (a, b, c) = (rats(&a), rats(&b), rats(&c));
        prop_assert_eq!(sumset(&a, &b), sumset(&b, &a));
        prop_assert_eq!(sumset(&sumset(&a, &b), &c), sumset(&a, &sumset(&b, &c)));
        prop_assert_eq!(sumset(&a, &FinSet::zero()), a);
    }

    #[test]
    fn min_and_max_are_additive(a in small_set(30, 5), b in small_set(30, 5)) {
        let c = &sumset(&rats(&a), &rats(&b));
        let lo = a.first().unwrap() + b.first().unwrap();
        let hi = a.last().unwrap() + b.last().unwrap();
        prop_assert_eq!(c.min(), &Rat::int(lo));
        prop_assert_eq!(c.max(), &Rat::int(hi));
    }

    #[test]
    fn sumset_size_bounds(a in small_set(30, 5), b in small_set(30, 5)) {
        let n = sumset(&rats(&a), &rats(&b)).len();
        prop_assert!(n + 1 >= a.len() + b.len());
        prop_assert!(n <= a.len() * b.len());
        if a.len() >= 2 {
            prop_assert!(n > b.len());
        }
    }

    #[test]
    fn constructed_sums_are_divisible(a in small_set(12, 3), u in small_set(12, 3)) {
        let m = Rank1Monoid::new(vec![Rat::int(2), Rat::int(3)]).unwrap();
        let reach = numerical_members(&[2, 3], 30);
        let keep = |v: &BTreeSet<i64>| v.iter().copied().filter(|&x| reach[x as usize]).collect::<BTreeSet<_>>();
        let (a, u) = (keep(&a), keep(&u));
        prop_assume!(!a.is_empty() && !u.is_empty());
        let (a, u) = (rats(&a), rats(&u));
        let b = sumset(&a, &u);
        let mut budget = Budget::default();
        let w = divides_in_p(&a, &b, &m, &mut budget).unwrap().expect("constructed sum");
        prop_assert_eq!(sumset(&a, &w), b);
        prop_assert!(u.is_subset_of(&w));
    }

    #[test]
    fn membership_matches_reachability(gens in prop::collection::btree_set(2i64..12, 1..4), x in 0i64..60) {
        let gens: Vec<i64> = gens.into_iter().collect();
        let m = Rank1Monoid::new(gens.iter().map(|&g| Rat::int(g)).collect()).unwrap();
        let reach = numerical_members(&gens, 60);
        let mut budget = Budget::default();
        prop_assert_eq!(m.member(&Rat::int(x), &mut budget).unwrap(), reach[x as usize]);
        for z in m.factorizations(&Rat::int(x), &mut budget).unwrap() {
            prop_assert_eq!(z.value(), Rat::int(x));
        }
    }

    #[test]
    fn p_factorizations_resum(v in small_set(8, 3)) {
        let m = Rank1Monoid::new(vec![Rat::one()]).unwrap();
        let s = rats(&v);
        let mut budget = Budget::default();
        let parts = p_factorize(&s, &m, &mut budget).unwrap();
        if s.is_zero() {
            prop_assert!(parts.is_empty());
        } else {
            prop_assert_eq!(sum_all(&parts), s);
        }
        for p in &parts {
            prop_assert!(is_p_atom(p, &m, &mut budget).unwrap().is_atom);
        }
    }

    #[test]
    fn canonical_decomposition_reconstructs(num in -400i64..400, mask in 1usize..32) {
        let primes = [3i64, 5, 7, 11, 13];
        let den: i64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
        let q = Rat::new(num, den).unwrap();
        let d = canonical_decomp_q(&q).unwrap();
        prop_assert_eq!(d.reconstruct(), q);
        for (&p, &c) in &d.coeffs {
            prop_assert!(c > 0 && c < p);
        }
        prop_assert_eq!(d.k, 2 - d.ell);
    }
}

#[test]
fn even_denominators_are_outside_the_group() {
    assert!(canonical_decomp_q(&Rat::new(1, 6).unwrap()).is_err());
}
