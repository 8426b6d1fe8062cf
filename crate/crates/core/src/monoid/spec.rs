//! The plain-text monoid spec format.
//!
//! ```text
//! # comments run to end of line
//! kind numerical          # numerical | puiseux | rank2 | family
//! gens 2, 3               # rationals, or points `(x, y)` for rank2
//! family EX44 depth 3     # EX44 | RANK2-5.3 | Q-ODDPRIMES, optional `offset k`
//! sample 7/3, 32/15       # RANK2-5.3 only
//! ```

use std::fmt;
use std::str::FromStr;

use super::family::{
    default_rank2_sample, ex44_generators, odd_prime_generators, rank2_generators,
};
use super::{AnyMonoid, Rank1Monoid, Rank2Monoid};
use crate::arith::{QPoint2, Rat};
use crate::element::split_top_level;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    NumericalGens,
    PuiseuxGens,
    Rank2Lex,
    TruncatedFamily,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::NumericalGens => "numerical",
            Kind::PuiseuxGens => "puiseux",
            Kind::Rank2Lex => "rank2",
            Kind::TruncatedFamily => "family",
        }
    }

    fn from_keyword(s: &str) -> Option<Kind> {
        Some(match s {
            "numerical" => Kind::NumericalGens,
            "puiseux" => Kind::PuiseuxGens,
            "rank2" => Kind::Rank2Lex,
            "family" => Kind::TruncatedFamily,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Ex44,
    Rank2Sample,
    OddPrimes,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Ex44 => "EX44",
            FamilyTag::Rank2Sample => "RANK2-5.3",
            FamilyTag::OddPrimes => "Q-ODDPRIMES",
        }
    }

    pub fn is_rank2(self) -> bool {
        self == FamilyTag::Rank2Sample
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "EX44" => Ok(FamilyTag::Ex44),
            "RANK2-5.3" => Ok(FamilyTag::Rank2Sample),
            "Q-ODDPRIMES" => Ok(FamilyTag::OddPrimes),
            _ => Err(Error::invalid(format!("unknown family `{s}`"))),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    pub depth: u32,
    /// Shift of the prime index for EX44; zero elsewhere.
    pub offset: usize,
    /// Sample of `q` values for RANK2-5.3; empty elsewhere.
    pub sample: Vec<Rat>,
}

impl FamilySpec {
    pub fn new(tag: FamilyTag, depth: u32) -> Self {
        let sample = if tag.is_rank2() {
            default_rank2_sample()
        } else {
            Vec::new()
        };
        FamilySpec {
            tag,
            depth,
            offset: 0,
            sample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generators {
    Rational(Vec<Rat>),
    Planar(Vec<QPoint2>),
}

impl Generators {
    pub fn len(&self) -> usize {
        match self {
            Generators::Rational(v) => v.len(),
            Generators::Planar(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidSpec {
    pub kind: Kind,
    /// Sorted and deduplicated. Empty for a family spec until expanded.
    pub generators: Generators,
    pub family: Option<FamilySpec>,
}

impl MonoidSpec {
    pub fn numerical(gens: &[u64]) -> Result<Self> {
        let gens = gens.iter().map(|&g| Rat::int(g)).collect();
        Self::checked(Kind::NumericalGens, Generators::Rational(gens))
    }

    pub fn puiseux(gens: Vec<Rat>) -> Result<Self> {
        Self::checked(Kind::PuiseuxGens, Generators::Rational(gens))
    }

    pub fn rank2(gens: Vec<QPoint2>) -> Result<Self> {
        Self::checked(Kind::Rank2Lex, Generators::Planar(gens))
    }

    pub fn family(mut family: FamilySpec) -> Result<Self> {
        family.sample.sort();
        family.sample.dedup();
        if family.depth == 0 {
            return Err(Error::invalid("family depth must be at least 1"));
        }
        if !family.sample.is_empty() && !family.tag.is_rank2() {
            return Err(Error::invalid("only RANK2-5.3 takes a sample"));
        }
        let empty = if family.tag.is_rank2() {
            Generators::Planar(Vec::new())
        } else {
            Generators::Rational(Vec::new())
        };
        Ok(MonoidSpec {
            kind: Kind::TruncatedFamily,
            generators: empty,
            family: Some(family),
        })
    }

    fn checked(kind: Kind, gens: Generators) -> Result<Self> {
        let gens = match gens {
            Generators::Rational(v) => {
                if let Some(g) = v.iter().find(|g| !g.is_positive()) {
                    return Err(Error::invalid(format!("generator {g} is not positive")));
                }
                if kind == Kind::NumericalGens {
                    if let Some(g) = v.iter().find(|g| !g.is_integer()) {
                        return Err(Error::invalid(format!(
                            "numerical generator {g} is not an integer"
                        )));
                    }
                }
                Generators::Rational(sorted_unique(v)?)
            }
            Generators::Planar(v) => {
                if let Some(g) = v
                    .iter()
                    .find(|g| !g.is_positive() || (g.y.is_zero() && g.x.is_negative()))
                {
                    return Err(Error::invalid(format!("generator {g} is not positive")));
                }
                Generators::Planar(sorted_unique(v)?)
            }
        };
        Ok(MonoidSpec {
            kind,
            generators: gens,
            family: None,
        })
    }

    pub fn is_rank2(&self) -> bool {
        matches!(self.generators, Generators::Planar(_))
    }

    /// The same spec with the family's generators written out.
    pub fn expand(&self) -> Result<MonoidSpec> {
        let Some(fam) = &self.family else {
            return Ok(self.clone());
        };
        let generators = match fam.tag {
            FamilyTag::Ex44 => Generators::Rational(ex44_generators(fam.depth, fam.offset)?.all()),
            FamilyTag::OddPrimes => Generators::Rational(odd_prime_generators(fam.depth)?),
            FamilyTag::Rank2Sample => Generators::Planar(rank2_generators(&fam.sample, fam.depth)?),
        };
        Ok(MonoidSpec {
            kind: Kind::TruncatedFamily,
            generators,
            family: Some(fam.clone()),
        })
    }

    pub fn build(&self) -> Result<AnyMonoid> {
        let spec = self.expand()?;
        let truncated = spec.kind == Kind::TruncatedFamily;
        Ok(match spec.generators {
            Generators::Rational(g) if truncated => AnyMonoid::Rank1(Rank1Monoid::truncation(g)?),
            Generators::Rational(g) => AnyMonoid::Rank1(Rank1Monoid::new(g)?),
            Generators::Planar(g) if truncated => AnyMonoid::Rank2(Rank2Monoid::truncation(g)?),
            Generators::Planar(g) => AnyMonoid::Rank2(Rank2Monoid::new(g)?),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Short one-line name, e.g. `numerical 2, 3` or `EX44 depth 3`.
    pub fn label(&self) -> String {
        if let Some(f) = &self.family {
            let mut s = format!("{} depth {}", f.tag, f.depth);
            if f.offset > 0 {
                s.push_str(&format!(" offset {}", f.offset));
            }
            return s;
        }
        let gens: Vec<String> = match &self.generators {
            Generators::Rational(v) => v.iter().map(ToString::to_string).collect(),
            Generators::Planar(v) => v.iter().map(ToString::to_string).collect(),
        };
        format!("{} {}", self.kind.keyword(), gens.join(", "))
    }
}

fn sorted_unique<T: Ord + fmt::Display>(mut v: Vec<T>) -> Result<Vec<T>> {
    v.sort();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("duplicate generator {}", w[0])));
    }
    Ok(v)
}

impl fmt::Display for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind {}", self.kind.keyword())?;
        if let Some(fam) = &self.family {
            write!(f, "family {} depth {}", fam.tag, fam.depth)?;
            if fam.offset != 0 {
                write!(f, " offset {}", fam.offset)?;
            }
            writeln!(f)?;
            if !fam.sample.is_empty() {
                writeln!(f, "sample {}", join(&fam.sample))?;
            }
            return Ok(());
        }
        match &self.generators {
            Generators::Rational(v) => writeln!(f, "gens {}", join(v)),
            Generators::Planar(v) => writeln!(f, "gens {}", join(v)),
        }
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl FromStr for MonoidSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Where a directive appeared, for error reporting.
#[derive(Clone, Copy, Default)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Default)]
struct Parser {
    kind: Option<(Kind, Pos)>,
    gens: Option<(Generators, Pos)>,
    family: Option<(FamilyTag, u32, usize, Pos)>,
    sample: Option<(Vec<Rat>, Pos)>,
}

/// Whitespace-separated words with 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out.into_iter()
        .map(|(s, w)| (line[..s].chars().count() + 1, w))
        .collect()
}

fn list<T: FromStr<Err = Error>>(line: usize, base: usize, text: &str) -> Result<Vec<T>> {
    Ok(located(line, base, text)?
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

/// Parsed list items with their 1-based columns.
fn located<T: FromStr<Err = Error>>(
    line: usize,
    base: usize,
    text: &str,
) -> Result<Vec<(usize, T)>> {
    let mut out = Vec::new();
    for (off, item) in split_top_level(text) {
        let lead = item.len() - item.trim_start().len();
        let column = base + text[..off + lead].chars().count();
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::syntax(line, column, "empty list item"));
        }
        let v = item
            .parse()
            .map_err(|e: Error| Error::syntax(line, column, strip(e)))?;
        out.push((column, v));
    }
    Ok(out)
}

fn check_distinct<T: PartialEq + fmt::Display>(line: usize, items: &[(usize, T)]) -> Result<()> {
    for (i, (c, g)) in items.iter().enumerate() {
        if items[..i].iter().any(|(_, h)| h == g) {
            return Err(Error::syntax(line, *c, format!("duplicate generator {g}")));
        }
    }
    Ok(())
}

fn strip(e: Error) -> String {
    match e {
        Error::InvalidInput(m) => m,
        other => other.to_string(),
    }
}

impl Parser {
    fn run(mut self, text: &str) -> Result<MonoidSpec> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("");
            let ws = words(body);
            let Some(&(col, head)) = ws.first() else {
                continue;
            };
            let pos = Pos { line, column: col };
            let dup = |what: &str| Error::syntax(line, col, format!("repeated `{what}` directive"));
            match head {
                "kind" => {
                    if self.kind.is_some() {
                        return Err(dup("kind"));
                    }
                    let [_, (c, k)] = ws[..] else {
                        return Err(Error::syntax(
                            line,
                            col,
                            "expected `kind <numerical|puiseux|rank2|family>`",
                        ));
                    };
                    let kind = Kind::from_keyword(k)
                        .ok_or_else(|| Error::syntax(line, c, format!("unknown kind `{k}`")))?;
                    self.kind = Some((kind, pos));
                }
                "gens" => {
                    if self.gens.is_some() {
                        return Err(dup("gens"));
                    }
                    let start = body.find("gens").unwrap() + 4;
                    let rest = &body[start..];
                    let base = body[..start].chars().count() + 1;
                    let gens = if rest.trim_start().starts_with('(') {
                        let items: Vec<(usize, QPoint2)> = located(line, base, rest)?;
                        if let Some((c, g)) = items
                            .iter()
                            .find(|(_, g)| !g.is_positive() || (g.y.is_zero() && g.x.is_negative()))
                        {
                            return Err(Error::syntax(
                                line,
                                *c,
                                format!("generator {g} is not positive"),
                            ));
                        }
                        check_distinct(line, &items)?;
                        Generators::Planar(items.into_iter().map(|(_, g)| g).collect())
                    } else {
                        let items: Vec<(usize, Rat)> = located(line, base, rest)?;
                        if let Some((c, g)) = items.iter().find(|(_, g)| !g.is_positive()) {
                            return Err(Error::syntax(
                                line,
                                *c,
                                format!("generator {g} is not positive"),
                            ));
                        }
                        check_distinct(line, &items)?;
                        Generators::Rational(items.into_iter().map(|(_, g)| g).collect())
                    };
                    self.gens = Some((gens, pos));
                }
                "sample" => {
                    if self.sample.is_some() {
                        return Err(dup("sample"));
                    }
                    let start = body.find("sample").unwrap() + 6;
                    let base = body[..start].chars().count() + 1;
                    self.sample = Some((list(line, base, &body[start..])?, pos));
                }
                "family" => {
                    if self.family.is_some() {
                        return Err(dup("family"));
                    }
                    let Some(&(tc, tag)) = ws.get(1) else {
                        return Err(Error::syntax(line, col, "expected a family name"));
                    };
                    let tag: FamilyTag =
                        tag.parse().map_err(|e| Error::syntax(line, tc, strip(e)))?;
                    let mut depth = None;
                    let mut offset = 0usize;
                    let mut rest = ws[2..].iter();
                    while let Some(&(kc, key)) = rest.next() {
                        let Some(&(vc, val)) = rest.next() else {
                            return Err(Error::syntax(line, kc, format!("`{key}` needs a value")));
                        };
                        let num: u64 = val.parse().map_err(|_| {
                            Error::syntax(line, vc, format!("`{val}` is not a nonnegative integer"))
                        })?;
                        match key {
                            "depth" if num >= 1 && num <= u32::MAX as u64 => {
                                depth = Some(num as u32)
                            }
                            "depth" => {
                                return Err(Error::syntax(line, vc, "depth must be at least 1"))
                            }
                            "offset" => offset = num as usize,
                            _ => {
                                return Err(Error::syntax(
                                    line,
                                    kc,
                                    format!("unknown family option `{key}`"),
                                ))
                            }
                        }
                    }
                    let depth =
                        depth.ok_or_else(|| Error::syntax(line, col, "family needs `depth N`"))?;
                    if offset != 0 && tag != FamilyTag::Ex44 {
                        return Err(Error::syntax(line, col, "only EX44 takes an offset"));
                    }
                    self.family = Some((tag, depth, offset, pos));
                }
                other => {
                    return Err(Error::syntax(
                        line,
                        col,
                        format!("unknown directive `{other}`"),
                    ));
                }
            }
        }
        self.finish()
    }

    fn finish(self) -> Result<MonoidSpec> {
        let at = |p: Pos, e: Error| Error::syntax(p.line, p.column, strip(e));
        if let (Some((_, gp)), Some(_)) = (&self.gens, &self.family) {
            return Err(Error::syntax(
                gp.line,
                gp.column,
                "`gens` and `family` are exclusive",
            ));
        }
        if let Some((tag, depth, offset, fp)) = self.family {
            if let Some((k, kp)) = self.kind {
                if k != Kind::TruncatedFamily {
                    return Err(Error::syntax(
                        kp.line,
                        kp.column,
                        "a family spec needs `kind family`",
                    ));
                }
            }
            let mut fam = FamilySpec::new(tag, depth);
            fam.offset = offset;
            if let Some((sample, sp)) = self.sample {
                if !tag.is_rank2() {
                    return Err(Error::syntax(
                        sp.line,
                        sp.column,
                        "only RANK2-5.3 takes a sample",
                    ));
                }
                fam.sample = sorted_unique(sample).map_err(|e| at(sp, e))?;
            }
            let spec = MonoidSpec::family(fam).map_err(|e| at(fp, e))?;
            // reject bad samples at parse time rather than at build time
            if tag.is_rank2() {
                spec.expand().map_err(|e| at(fp, e))?;
            }
            return Ok(spec);
        }
        if let Some((_, sp)) = self.sample {
            return Err(Error::syntax(
                sp.line,
                sp.column,
                "`sample` needs a RANK2-5.3 family",
            ));
        }
        let Some((gens, gp)) = self.gens else {
            return Err(Error::syntax(1, 1, "spec needs `gens` or `family`"));
        };
        let kind = match (self.kind, &gens) {
            (Some((Kind::TruncatedFamily, kp)), _) => {
                return Err(Error::syntax(
                    kp.line,
                    kp.column,
                    "`kind family` needs a `family` line",
                ));
            }
            (Some((Kind::Rank2Lex, _)), Generators::Planar(_)) => Kind::Rank2Lex,
            (Some((k, _)), Generators::Rational(_)) if k != Kind::Rank2Lex => k,
            (Some((k, kp)), _) => {
                return Err(Error::syntax(
                    kp.line,
                    kp.column,
                    format!("generators do not match `kind {}`", k.keyword()),
                ));
            }
            (None, Generators::Planar(_)) => Kind::Rank2Lex,
            (None, Generators::Rational(v)) if v.iter().all(Rat::is_integer) => Kind::NumericalGens,
            (None, Generators::Rational(_)) => Kind::PuiseuxGens,
        };
        MonoidSpec::checked(kind, gens).map_err(|e| at(gp, e))
    }
}
