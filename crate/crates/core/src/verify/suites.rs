use std::fmt::Display;

use rand::Rng;

use super::report::{Check, Status};
use super::sample;
use super::{Meter, VerifyOptions};
use crate::arith::{QPoint2, Rat};
use crate::atomicity::{
    accp_chain_explore, is_furstenberg_sample, k_of, lemma54_sum_witness, p_accp_chain_explore,
    p_furstenberg_divisor, rank2_atom, thm55_projection_check, tidf_implies_atomic_check, Branch,
    DivisorBranch, SumWitness,
};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::mcd::{
    cap_constant_on, cap_residue, chain_values, constructive_mcd_in_p, ex44_chain,
    is_mcd_monoid_sample, mcd_in_p, mcd_sample_sets, subsets_up_to, McdVerdict,
};
use crate::monoid::family::{default_rank2_sample, ex44_monoid, rank2_monoid};
use crate::monoid::{
    ex44_generators, AnyMonoid, FamilySpec, FamilyTag, Monoid, MonoidSpec, Rank1Monoid,
};
use crate::powmon::{
    augment_indecomposable, divides_in_p, is_indecomposable, is_p_atom, p_divisors, p_factorize,
    sum_all, sumset, FinSet,
};

pub const SUITES: [&str; 12] = [
    "lemma-2.6",
    "lemma-3.2",
    "prop-4.1",
    "lemma-4.2",
    "thm-4.5",
    "ex-4.4",
    "cap-additivity",
    "lemma-5.2",
    "lemma-5.4",
    "thm-5.5-gap",
    "lemma-6.1",
    "prop-6.4",
];

pub(crate) struct SuiteRun {
    pub specs: Vec<String>,
    pub checks: Vec<Check>,
}

enum Outcome {
    Pass(String),
    Fail(String),
    Inconclusive(String),
}

use Outcome::{Fail, Inconclusive, Pass};

fn verdict(ok: bool, pass: impl Display, fail: impl Display) -> Outcome {
    if ok {
        Pass(pass.to_string())
    } else {
        Fail(fail.to_string())
    }
}

struct Ctx<'a> {
    suite: &'static str,
    opts: &'a VerifyOptions,
    specs: Vec<String>,
    checks: Vec<Check>,
}

impl<'a> Ctx<'a> {
    fn new(suite: &'static str, opts: &'a VerifyOptions) -> Self {
        Ctx {
            suite,
            opts,
            specs: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn spec(&mut self, spec: &MonoidSpec) {
        let line = spec.render().trim_end().replace('\n', "; ");
        if !self.specs.contains(&line) {
            self.specs.push(line);
        }
    }

    fn check(&mut self, name: impl Display, f: impl FnOnce(&mut Meter) -> Result<Outcome>) {
        let mut meter = Meter::new(self.opts.budget);
        let (status, witness) = match f(&mut meter) {
            Ok(Pass(w)) => (Status::Pass, w),
            Ok(Fail(w)) => (Status::Fail, w),
            Ok(Inconclusive(w)) => (Status::TruncationInconclusive, w),
            Err(Error::BudgetExceeded { limit, progress }) => (
                Status::BudgetExceeded,
                format!("budget of {limit} nodes exhausted ({progress} partial results)"),
            ),
            Err(Error::Truncation { message, achieved }) => (
                Status::TruncationInconclusive,
                format!("{message} (achieved length {achieved})"),
            ),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.checks.push(Check {
            id: format!("{}/{}", self.suite, name),
            status,
            witness,
            nodes: meter.used,
        });
    }

    fn salt(&self, name: &str, label: &str) -> String {
        format!("{}/{name}/{label}", self.suite)
    }

    fn finish(self) -> SuiteRun {
        SuiteRun {
            specs: self.specs,
            checks: self.checks,
        }
    }
}

pub(crate) fn run(name: &str, opts: &VerifyOptions) -> Result<SuiteRun> {
    match name {
        "lemma-2.6" => lemma_2_6(opts),
        "lemma-3.2" => lemma_3_2(opts),
        "prop-4.1" => prop_4_1(opts),
        "lemma-4.2" => lemma_4_2(opts),
        "thm-4.5" => thm_4_5(opts),
        "ex-4.4" => ex_4_4(opts),
        "cap-additivity" => cap_additivity(opts),
        "lemma-5.2" => lemma_5_2(opts),
        "lemma-5.4" => lemma_5_4(opts),
        "thm-5.5-gap" => thm_5_5_gap(opts),
        "lemma-6.1" => lemma_6_1(opts),
        "prop-6.4" => prop_6_4(opts),
        _ => Err(Error::invalid(format!("unknown suite `{name}`"))),
    }
}

/// The rank-1 monoids a generic suite runs on: the user's spec if given,
/// else the listed numerical monoids.
fn rank1_subjects(
    suite: &str,
    opts: &VerifyOptions,
    defaults: &[&[u64]],
) -> Result<Vec<(MonoidSpec, Rank1Monoid)>> {
    if let Some(spec) = &opts.spec {
        return match spec.build()? {
            AnyMonoid::Rank1(m) => Ok(vec![(spec.clone(), m)]),
            AnyMonoid::Rank2(_) => Err(Error::Unsupported(format!(
                "suite {suite} runs on rank-1 specs only"
            ))),
        };
    }
    defaults
        .iter()
        .map(|g| {
            let spec = MonoidSpec::numerical(g)?;
            let m = Rank1Monoid::new(g.iter().map(|&x| Rat::int(x)).collect())?;
            Ok((spec, m))
        })
        .collect()
}

fn bound_or(opts: &VerifyOptions, default: i64) -> Rat {
    opts.bound.clone().unwrap_or_else(|| Rat::int(default))
}

fn family_depth(opts: &VerifyOptions, tag: FamilyTag, default: u32) -> u32 {
    if let Some(d) = opts.depth {
        return d;
    }
    match opts.spec.as_ref().and_then(|s| s.family.as_ref()) {
        Some(f) if f.tag == tag => f.depth,
        _ => default,
    }
}

fn members<M: Monoid>(m: &M, bound: &M::Elem, meter: &mut Meter) -> Result<Vec<M::Elem>> {
    let pool = meter.run(|b| m.members_below(bound, b))?;
    if pool.is_empty() {
        return Err(Error::invalid(format!("no members up to {bound}")));
    }
    Ok(pool)
}

fn lemma_2_6(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-2.6", opts);
    let bound = bound_or(opts, 30);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[1], &[2, 3]])? {
        cx.spec(&spec);
        let label = spec.label();
        let mut rng = sample::rng(opts.seed, &format!("pairs/{label}"));
        cx.check(format!("min-max[{label}]"), |meter| {
            let pool = members(&m, &bound, meter)?;
            let corpus = sample::pairs(&pool, 1000, &mut rng);
            for (s, t) in &corpus {
                let c = &sumset(s, t);
                if c.min() != &s.min().add(t.min()) || c.max() != &s.max().add(t.max()) {
                    return Ok(Fail(format!("S={s} T={t} S+T={c}")));
                }
            }
            Ok(Pass(format!("{} pairs", corpus.len())))
        });
        let mut rng = sample::rng(opts.seed, &cx.salt("divides", &label));
        cx.check(format!("divisibility-witnesses[{label}]"), |meter| {
            let pool = members(&m, &bound, meter)?;
            let mut found = 0;
            for i in 0..500 {
                let a = &sample::subset(&pool, 1..=3, &mut rng);
                let (b, constructed) = if i % 2 == 0 {
                    (sumset(a, &sample::subset(&pool, 1..=3, &mut rng)), true)
                } else {
                    (sample::subset(&pool, 1..=4, &mut rng), false)
                };
                let b = &b;
                let Some(w) = meter.run(|bud| divides_in_p(a, b, &m, bud))? else {
                    if constructed {
                        return Ok(Fail(format!("no witness for {a} | {b}")));
                    }
                    continue;
                };
                found += 1;
                if &sumset(a, &w) != b {
                    return Ok(Fail(format!("{a} + {w} != {b}")));
                }
                if !meter.run(|bud| m.divides(a.min(), b.min(), bud))? {
                    return Ok(Fail(format!(
                        "min {} does not divide min {}",
                        a.min(),
                        b.min()
                    )));
                }
                if a.min() == b.min() && a != b && !(a.is_subset_of(b) && a.len() < b.len()) {
                    return Ok(Fail(format!("equal minima but {a} vs {b}")));
                }
            }
            Ok(Pass(format!("500 instances, {found} with witnesses")))
        });
    }
    Ok(cx.finish())
}

fn lemma_3_2(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-3.2", opts);
    let bound = bound_or(opts, 30);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[1], &[2, 3]])? {
        cx.spec(&spec);
        let label = spec.label();
        for strict in [false, true] {
            let mut rng = sample::rng(opts.seed, &format!("pairs/{label}"));
            let name = if strict {
                "strict-growth"
            } else {
                "size-bound"
            };
            cx.check(format!("{name}[{label}]"), |meter| {
                let pool = members(&m, &bound, meter)?;
                let corpus = sample::pairs(&pool, 1000, &mut rng);
                let mut strict_cases = 0;
                for (s, t) in &corpus {
                    let n = sumset(s, t).len();
                    if !strict && n + 1 < s.len() + t.len() {
                        return Ok(Fail(format!("|{s} + {t}| = {n}")));
                    }
                    if strict && s.len() >= 2 {
                        strict_cases += 1;
                        if n <= t.len() {
                            return Ok(Fail(format!("|{s} + {t}| = {n} <= |T|")));
                        }
                    }
                }
                Ok(Pass(if strict {
                    format!("{} pairs, {strict_cases} with |S| >= 2", corpus.len())
                } else {
                    format!("{} pairs", corpus.len())
                }))
            });
        }
    }
    Ok(cx.finish())
}

fn prop_4_1(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("prop-4.1", opts);
    let bound = bound_or(opts, 10);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[2, 3], &[3, 4, 5]])? {
        cx.spec(&spec);
        let label = spec.label();
        cx.check(format!("mcd-equivalence[{label}]"), |meter| {
            let m_level = match meter.run(|b| is_mcd_monoid_sample(&m, 2, &bound, b))? {
                McdVerdict::Holds { sets_checked } => Ok(sets_checked),
                other => Err(other.to_string()),
            };
            let pool = members(&m, &bound, meter)?;
            let sets = subsets_up_to(&pool, 2);
            let mut families: Vec<Vec<FinSet<Rat>>> = sets.iter().map(|s| vec![s.clone()]).collect();
            for i in 0..sets.len() {
                for j in i + 1..sets.len() {
                    families.push(vec![sets[i].clone(), sets[j].clone()]);
                }
            }
            let mut p_level = Ok(families.len());
            let mut incomparable = 0;
            for fam in &families {
                let found = meter.run(|b| mcd_in_p(fam, &m, b))?;
                if found.is_empty() {
                    p_level = Err(format!("no MCD for family {}", join(fam)));
                    break;
                }
                incomparable += usize::from(found.len() > 1);
                for d in &found {
                    for t in fam {
                        if meter.run(|b| divides_in_p(d, t, &m, b))?.is_none() {
                            return Ok(Fail(format!("{d} does not divide {t}")));
                        }
                    }
                }
                let built = meter.run(|b| constructive_mcd_in_p(fam, &m, b))?;
                if !found.contains(&built) {
                    return Ok(Fail(format!(
                        "constructed {built} is not among the MCDs {} of {}",
                        join(&found),
                        join(fam)
                    )));
                }
            }
            Ok(match (m_level, p_level) {
                (Ok(a), Ok(b)) => Pass(format!(
                    "M: all {a} sets of size <= 2 have an MCD; P: all {b} families have one, {incomparable} with several, constructed MCD always among them"
                )),
                (Err(a), Err(b)) => Pass(format!("both levels fail: {a}; {b}")),
                (a, b) => Fail(format!("levels disagree: M {a:?}, P {b:?}")),
            })
        });
    }
    Ok(cx.finish())
}

fn join<T: Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn lemma_4_2(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-4.2", opts);
    let bound = bound_or(opts, 9);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[1]])? {
        cx.spec(&spec);
        let label = spec.label();
        let mut rng = sample::rng(opts.seed, &cx.salt("augment", &label));
        cx.check(format!("augmented-sets-indecomposable[{label}]"), |meter| {
            let pool: Vec<Rat> = members(&m, &bound, meter)?
                .into_iter()
                .filter(|x| !x.is_zero())
                .collect();
            if pool.len() < 2 {
                return Err(Error::invalid("need two nonzero members below the bound"));
            }
            let mut example = String::new();
            for i in 0..200 {
                let s = sample::subset(&pool, 2..=4, &mut rng);
                let t = augment_indecomposable(&s)?;
                if !meter.run(|b| is_indecomposable(&t, &m, b))? {
                    return Ok(Fail(format!("{t} (from {s}) decomposes")));
                }
                if i == 0 {
                    example = format!("{s} -> {t}");
                }
            }
            Ok(Pass(format!("200 sets, e.g. {example}")))
        });
    }
    Ok(cx.finish())
}

fn thm_4_5(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("thm-4.5", opts);
    let bound = bound_or(opts, 12);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[2, 3]])? {
        cx.spec(&spec);
        let label = spec.label();
        cx.check(format!("p-factorizations[{label}]"), |meter| {
            let pool = members(&m, &bound, meter)?;
            let sets = subsets_up_to(&pool, 3);
            let mut longest: Option<(FinSet<Rat>, Vec<FinSet<Rat>>)> = None;
            for s in &sets {
                let parts = meter.run(|b| p_factorize(s, &m, b))?;
                for p in &parts {
                    if !meter.run(|b| is_p_atom(p, &m, b))?.is_atom {
                        return Ok(Fail(format!(
                            "{p} in the factorization of {s} is not an atom"
                        )));
                    }
                }
                if &sum_all(&parts) != s {
                    return Ok(Fail(format!("{} does not re-sum to {s}", join(&parts))));
                }
                if longest
                    .as_ref()
                    .map_or(true, |(_, l)| parts.len() > l.len())
                {
                    longest = Some((s.clone(), parts));
                }
            }
            let (s, parts) = longest.expect("at least one set");
            Ok(Pass(format!(
                "{} sets; longest: {s} = {}",
                sets.len(),
                parts
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" + ")
            )))
        });
        cx.check(format!("chain-profiles[{label}]"), |meter| {
            let pool = members(&m, &bound, meter)?;
            let sets = subsets_up_to(&pool, 3);
            for s in &sets {
                let c = meter.run(|b| p_accp_chain_explore(s, &m, 256, b))?;
                if !c.stabilized {
                    return Ok(Fail(format!("chain from {s} did not stabilize")));
                }
                for w in c.chain.windows(2) {
                    if w[1].len() > w[0].len()
                        || meter.run(|b| divides_in_p(&w[1], &w[0], &m, b))?.is_none()
                    {
                        return Ok(Fail(format!("bad link {} -> {} in {c}", w[0], w[1])));
                    }
                }
            }
            Ok(Pass(format!(
                "{} chains, non-increasing cardinality",
                sets.len()
            )))
        });
    }
    Ok(cx.finish())
}

fn ex44_spec(depth: u32) -> Result<MonoidSpec> {
    MonoidSpec::family(FamilySpec::new(FamilyTag::Ex44, depth))
}

fn ex_4_4(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("ex-4.4", opts);
    let depth = family_depth(opts, FamilyTag::Ex44, 6);
    cx.spec(&ex44_spec(depth)?);
    let one = Rat::one();
    let four_thirds = Rat::new(4, 3)?;
    cx.check("witness-chain", |meter| {
        let steps = meter.run(|b| ex44_chain(3, depth, b))?;
        let m = ex44_monoid(depth, 0)?;
        let values = chain_values(&steps);
        let expected: Vec<Rat> = (0..=3).map(|k| Rat::one() - Rat::pow2(-k)).collect();
        if values != expected {
            return Ok(Fail(format!("chain {}", join(&values))));
        }
        for (s, q) in steps.iter().zip(&values) {
            if !s.verify() {
                return Ok(Fail(format!("certificate does not re-add: {s}")));
            }
            for target in [&one, &four_thirds] {
                if !meter.run(|b| m.divides(q, target, b))? {
                    return Ok(Fail(format!("{q} does not divide {target}")));
                }
            }
        }
        let certs: Vec<String> = steps.iter().map(ToString::to_string).collect();
        Ok(Pass(format!("{} | {}", join(&values), certs.join(" | "))))
    });
    cx.check("no-a2-atom-divides-1", |meter| {
        let mut counts = Vec::new();
        for d in 1..=depth {
            let gens = ex44_generators(d, 0)?;
            let m = ex44_monoid(d, 0)?;
            let zs = meter.run(|b| m.factorizations(&one, b))?;
            if let Some(z) = zs
                .iter()
                .find(|z| gens.a2.iter().any(|a| z.multiplicity(a) > 0))
            {
                return Ok(Fail(format!("depth {d}: 1 = {z}")));
            }
            counts.push(zs.len());
        }
        Ok(Pass(format!(
            "factorization counts of 1 at depths 1..={depth}: {}",
            join(&counts)
        )))
    });
    cx.check("mcd-of-1-and-4/3", |meter| {
        let lo_depth = depth.saturating_sub(1).max(1);
        let lo = ex44_monoid(lo_depth, 0)?;
        let hi = ex44_monoid(lo_depth + 1, 0)?;
        let set = FinSet::new(vec![one.clone(), four_thirds.clone()])?;
        let v = meter.run(|b| mcd_sample_sets(&*lo, &[set], &[(lo_depth + 1, &*hi)], b))?;
        Ok(match v {
            McdVerdict::TruncationInconclusive { .. } => Pass(v.to_string()),
            McdVerdict::Holds { .. } => Inconclusive(format!(
                "the MCD found at depth {lo_depth} survives depth {}",
                lo_depth + 1
            )),
        })
    });
    Ok(cx.finish())
}

/// Each generator of the EX44 truncation with the prime only its
/// denominator carries.
fn private_pairs(depth: u32) -> Result<Vec<(Rat, u64)>> {
    let g = ex44_generators(depth, 0)?;
    Ok(g.a1
        .iter()
        .cloned()
        .zip(g.a1_primes.iter().copied())
        .chain(g.a2.iter().cloned().zip(g.a2_primes.iter().copied()))
        .collect())
}

fn cap_additivity(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("cap-additivity", opts);
    let depth = family_depth(opts, FamilyTag::Ex44, 3);
    cx.spec(&ex44_spec(depth)?);
    let mut rng = sample::rng(opts.seed, &cx.salt("pairs", ""));
    cx.check("residue-additivity", |_| {
        let m = ex44_monoid(depth, 0)?;
        let pairs = private_pairs(depth)?;
        for _ in 0..500 {
            let q = sample::combination(m.generators(), 4, &mut rng);
            let r = sample::combination(m.generators(), 4, &mut rng);
            for (a, p) in &pairs {
                let lhs = cap_residue(&(&q + &r), a, *p, &m)?;
                let rhs = cap_residue(&q, a, *p, &m)?.add(cap_residue(&r, a, *p, &m)?);
                if lhs != rhs {
                    return Ok(Fail(format!("q={q} r={r} a={a}: {lhs} vs {rhs}")));
                }
            }
        }
        Ok(Pass(format!("500 pairs x {} atoms", pairs.len())))
    });
    let mut rng = sample::rng(opts.seed, &cx.salt("factorizations", ""));
    cx.check("residue-matches-factorizations", |meter| {
        let m = ex44_monoid(depth, 0)?;
        let pairs = private_pairs(depth)?;
        let mut counted = 0;
        for _ in 0..40 {
            let q = sample::combination(m.generators(), 2, &mut rng);
            let zs = meter.run(|b| m.factorizations(&q, b))?;
            counted += zs.len();
            for z in &zs {
                for (a, p) in &pairs {
                    let c = cap_residue(&q, a, *p, &m)?;
                    if z.multiplicity(a) % p != c.residue {
                        return Ok(Fail(format!("{q} = {z} but c = {c} for {a}")));
                    }
                }
            }
        }
        Ok(Pass(format!("40 elements, {counted} factorizations")))
    });
    Ok(cx.finish())
}

fn lemma_5_2(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-5.2", opts);
    let depth = family_depth(opts, FamilyTag::Ex44, 2);
    cx.spec(&ex44_spec(depth)?);
    let mut rng = sample::rng(opts.seed, &cx.salt("sets", ""));
    cx.check("constant-on-divisors", |meter| {
        let m = ex44_monoid(depth, 0)?;
        let pairs = private_pairs(depth)?;
        let (mut constant, mut divisors) = (0, 0);
        for _ in 0..100 {
            let mut side = || {
                let k = rng.gen_range(1..=2);
                FinSet::new(
                    (0..k)
                        .map(|_| sample::combination(m.generators(), 2, &mut rng))
                        .collect::<Vec<_>>(),
                )
                .expect("nonempty")
            };
            let s = sumset(&side(), &side());
            let ds = meter.run(|b| p_divisors(&s, &*m, b))?;
            for (a, p) in &pairs {
                if !cap_constant_on(&s, a, *p, &m)? {
                    continue;
                }
                constant += 1;
                for d in &ds {
                    divisors += 1;
                    if !cap_constant_on(d, a, *p, &m)? {
                        return Ok(Fail(format!(
                            "constant on {s} but not on its divisor {d} (atom {a})"
                        )));
                    }
                }
            }
        }
        if constant == 0 {
            return Ok(Fail("no sampled set had a constant residue".to_string()));
        }
        Ok(Pass(format!(
            "100 sets, {constant} constant (set, atom) pairs, {divisors} divisors checked"
        )))
    });
    Ok(cx.finish())
}

fn witness_line(w: &SumWitness) -> String {
    w.to_string()
}

fn lemma_5_4(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-5.4", opts);
    let q = Rat::new(7, 3)?;
    for (b2, name) in [
        (Branch::B, "sum-witness[7/3, 7/3, A, B]"),
        (Branch::A, "sum-witness[7/3, 7/3, A, A]"),
    ] {
        let q = q.clone();
        cx.check(name, move |_| {
            let w = lemma54_sum_witness(&q, &q, (Branch::A, b2), 5)?;
            let expect_right = [
                QPoint2::new(Rat::recip_of(5), Rat::new(32, 15)? + Rat::pow2(-1)),
                QPoint2::new(b2.first_coordinate(), Rat::new(38, 15)? + Rat::one()),
            ];
            let expect_inc = QPoint2::new(Rat::zero(), Rat::pow2(-1));
            let ok =
                w.p == 5 && w.right == expect_right && w.increment == expect_inc && w.verify()?;
            Ok(verdict(
                ok,
                witness_line(&w),
                format!("unexpected witness {w}"),
            ))
        });
    }
    let mut rng = sample::rng(opts.seed, &cx.salt("random", ""));
    cx.check("random-sums-at-truncation", |meter| {
        let mut shown = Vec::new();
        for i in 0..50 {
            let q = sample::band_rational(&mut rng);
            let r = sample::band_rational(&mut rng);
            let branch =
                |rng: &mut rand_chacha::ChaCha8Rng| if rng.gen() { Branch::A } else { Branch::B };
            let branches = (branch(&mut rng), branch(&mut rng));
            let w = lemma54_sum_witness(&q, &r, branches, 3)?;
            let (q2, r2) = w.shifted();
            if !w.verify()? || k_of(&q2)? != k_of(&q)? + 1 || k_of(&r2)? != k_of(&r)? {
                return Ok(Fail(format!("witness does not check: {w}")));
            }
            let mut sample_qs = vec![q.clone(), r.clone(), q2, r2];
            sample_qs.sort();
            sample_qs.dedup();
            let depth = u32::try_from(w.n).map_err(|_| Error::invalid("negative dyadic index"))?;
            let m = rank2_monoid(&sample_qs, depth.max(1))?;
            let gens = m.generators();
            if !w.right.iter().all(|a| gens.contains(a)) || !gens.contains(&w.increment) {
                return Ok(Fail(format!("summands of {w} are not generators")));
            }
            let rest = w.left[0].add(&w.left[1]).sub(&w.increment);
            if !meter.run(|b| m.member(&rest, b))? {
                return Ok(Fail(format!("{rest} is not in the truncation for {w}")));
            }
            if i < 3 {
                shown.push(witness_line(&w));
            }
        }
        Ok(Pass(format!("50 pairs; {}", shown.join(" | "))))
    });
    Ok(cx.finish())
}

fn pt(x: Rat, y: Rat) -> QPoint2 {
    QPoint2::new(x, y)
}

fn thm_5_5_gap(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("thm-5.5-gap", opts);
    let depth = family_depth(opts, FamilyTag::Rank2Sample, 3);
    let sample_qs = match opts.spec.as_ref().and_then(|s| s.family.as_ref()) {
        Some(f) if f.tag == FamilyTag::Rank2Sample && !f.sample.is_empty() => f.sample.clone(),
        _ => default_rank2_sample(),
    };
    let mut fam = FamilySpec::new(FamilyTag::Rank2Sample, depth);
    fam.sample = sample_qs.clone();
    cx.spec(&MonoidSpec::family(fam)?);
    cx.check("trichotomy-negative-control", |meter| {
        let m = rank2_monoid(&sample_qs, depth)?;
        let headed = FinSet::singleton(pt(Rat::new(2, 35)?, Rat::zero()));
        let rep = meter.run(|b| thm55_projection_check(&[headed.clone()], &m, b))?;
        Ok(verdict(
            rep.trichotomy_violations == vec![headed.clone()],
            format!("{headed} reported as a trichotomy violation"),
            format!("{headed} not reported"),
        ))
    });
    let mut rng = sample::rng(opts.seed, &cx.salt("sets", ""));
    cx.check("sampled-p-atoms", |meter| {
        let m = rank2_monoid(&sample_qs, depth)?;
        let bound = pt(Rat::one(), Rat::int(8));
        let pool = members(&*m, &bound, meter)?;
        let (mut atoms, mut tri, mut gap, mut tiny, mut pair) = (0, 0, 0, 0, 0);
        let mut first_tri = None;
        let mut first_gap = None;
        for _ in 0..100 {
            let s = sample::subset(&pool, 1..=3, &mut rng);
            let parts = meter.run(|b| p_factorize(&s, &*m, b))?;
            let rep = meter.run(|b| thm55_projection_check(&parts, &m, b))?;
            atoms += parts.len();
            if !rep.trichotomy_violations.is_empty() {
                tri += 1;
                first_tri.get_or_insert_with(|| format!("{s} = {}", join(&parts)));
            }
            if !rep.gap_violations.is_empty() {
                gap += 1;
                first_gap.get_or_insert_with(|| {
                    format!("{s} = {} has offsets {}", join(&parts), join(&rep.offsets.iter().collect::<Vec<_>>()))
                });
            }
            tiny += usize::from(rep.hits_one_35th);
            pair += usize::from(rep.pair_divides_sum);
        }
        let counts = format!(
            "100 sets, {atoms} atoms; {tri} with a trichotomy violation, {gap} with an offset in (-inf, 0) or (0, 2/35), {tiny} hitting 1/35, {pair} divisible by {{(2/5, 20/3), (3/7, 10)}}"
        );
        if tri + gap + tiny == 0 {
            return Ok(Pass(format!("mechanism verified on samples: {counts}")));
        }
        let mut w = counts;
        if let Some(t) = first_tri {
            w.push_str(&format!("; first trichotomy violation: {t}"));
        }
        if let Some(g) = first_gap {
            w.push_str(&format!("; first offset violation: {g}"));
        }
        Ok(Fail(w))
    });
    cx.check("one-35th-offset", |meter| {
        let m = rank2_monoid(&sample_qs, depth)?;
        let a = rank2_atom(&Rat::new(7, 3)?, Branch::A)?;
        let b = rank2_atom(&Rat::new(7, 3)?, Branch::B)?;
        let first = FinSet::new(vec![a.clone(), b.add(&pt(Rat::zero(), Rat::one()))])?;
        let second = FinSet::new(vec![a, b.times(2)])?;
        let rep =
            meter.run(|bud| thm55_projection_check(&[first.clone(), second.clone()], &m, bud))?;
        let offsets = join(&rep.offsets.iter().collect::<Vec<_>>());
        Ok(verdict(
            rep.holds(),
            format!("mechanism verified: offsets {offsets}"),
            format!(
                "p-atoms {first} and {second}: sum offsets {offsets}; 1/35 attained: {}",
                rep.hits_one_35th
            ),
        ))
    });
    Ok(cx.finish())
}

fn lemma_6_1(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("lemma-6.1", opts);
    let bound = bound_or(opts, 10);
    for (spec, m) in rank1_subjects(cx.suite, opts, &[&[2, 3]])? {
        cx.spec(&spec);
        let label = spec.label();
        cx.check(format!("atom-divisors[{label}]"), |meter| {
            let pool = members(&m, &bound, meter)?;
            let (mut single, mut wide) = (None, None);
            let sets: Vec<FinSet<Rat>> = subsets_up_to(&pool, 3)
                .into_iter()
                .filter(|s| !s.is_zero())
                .collect();
            for s in &sets {
                let d = meter.run(|b| p_furstenberg_divisor(s, &m, b))?;
                if !meter.run(|b| is_p_atom(&d.atom, &m, b))?.is_atom {
                    return Ok(Fail(format!("{} returned for {s} is not an atom", d.atom)));
                }
                if &sumset(&d.atom, &d.quotient) != s {
                    return Ok(Fail(format!("{} + {} != {s}", d.atom, d.quotient)));
                }
                let slot = match d.branch {
                    DivisorBranch::Singleton => &mut single,
                    DivisorBranch::Wide => &mut wide,
                };
                slot.get_or_insert_with(|| format!("{s} -> {}", d.atom));
            }
            Ok(match (single, wide) {
                (Some(a), Some(b)) => Pass(format!(
                    "{} sets; singleton branch e.g. {a}; wide branch e.g. {b}",
                    sets.len()
                )),
                _ => Fail(format!("{} sets but one branch was never used", sets.len())),
            })
        });
    }
    Ok(cx.finish())
}

fn prop_6_4(opts: &VerifyOptions) -> Result<SuiteRun> {
    let mut cx = Ctx::new("prop-6.4", opts);
    let mut subjects: Vec<(MonoidSpec, Rank1Monoid, Rat)> =
        rank1_subjects(cx.suite, opts, &[&[2, 3]])?
            .into_iter()
            .map(|(s, m)| (s, m, bound_or(opts, 30)))
            .collect();
    if opts.spec.is_none() {
        let spec = ex44_spec(2)?;
        let AnyMonoid::Rank1(m) = spec.build()? else {
            unreachable!("EX44 is rank 1")
        };
        subjects.push((spec, m, Rat::int(2)));
    }
    for (spec, m, bound) in &subjects {
        cx.spec(spec);
        let label = spec.label();
        cx.check(format!("descent[{label}]"), |meter| {
            let rep = meter.run(|b| tidf_implies_atomic_check(m, bound, b))?;
            let (b, steps) = &rep.longest;
            Ok(match &rep.failure {
                None => Pass(format!(
                    "{} members up to {bound}; longest descent {steps} steps from {b}",
                    rep.checked
                )),
                Some((b, steps)) => Fail(format!("descent from {b} took {steps} steps or stalled")),
            })
        });
        cx.check(format!("furstenberg[{label}]"), |meter| {
            let v = meter.run(|b| is_furstenberg_sample(m, bound, b))?;
            Ok(verdict(v.holds(), &v, &v))
        });
        cx.check(format!("accp-chains[{label}]"), |meter| {
            let pool = members(m, bound, meter)?;
            let mut longest = None;
            for b in &pool {
                let c = meter.run(|bud| accp_chain_explore(b, m, 4096, bud))?;
                if !c.stabilized || c.chain.last().is_some_and(|x| !x.is_zero()) {
                    return Ok(Fail(format!("chain from {b} did not reach 0: {c}")));
                }
                for w in c.chain.windows(2) {
                    if !m.is_atom(&(&w[0] - &w[1])) {
                        return Ok(Fail(format!("step {} -> {} is not an atom", w[0], w[1])));
                    }
                }
                if longest.as_ref().map_or(true, |(n, _)| c.length() > *n) {
                    longest = Some((c.length(), c.to_string()));
                }
            }
            let (_, chain) = longest.expect("pool is nonempty");
            Ok(Pass(format!("{} chains; longest {chain}", pool.len())))
        });
    }
    Ok(cx.finish())
}
