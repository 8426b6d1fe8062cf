use std::fmt;
use std::str::FromStr;

use crate::element::{split_top_level, Element};
use crate::error::{Error, Result};

/// A nonempty finite set of monoid elements, kept sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet<E> {
    elems: Vec<E>,
}

impl<E: Element> FinSet<E> {
    pub fn new(elems: impl IntoIterator<Item = E>) -> Result<Self> {
        let mut elems: Vec<E> = elems.into_iter().collect();
        if elems.is_empty() {
            return Err(Error::invalid("finite sets must be nonempty"));
        }
        elems.sort();
        elems.dedup();
        Ok(FinSet { elems })
    }

    /// Caller guarantees `elems` is nonempty, sorted and deduplicated.
    pub(crate) fn from_sorted(elems: Vec<E>) -> Self {
        debug_assert!(!elems.is_empty() && elems.windows(2).all(|w| w[0] < w[1]));
        FinSet { elems }
    }

    pub fn singleton(e: E) -> Self {
        FinSet { elems: vec![e] }
    }

    /// The identity `{0}`.
    pub fn zero() -> Self {
        Self::singleton(E::zero())
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> &E {
        &self.elems[0]
    }

    pub fn max(&self) -> &E {
        self.elems.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.elems.len() == 1 && self.elems[0].is_zero()
    }

    pub fn is_singleton(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    /// `{s + e : s ∈ self}`.
    pub fn translate(&self, e: &E) -> Self {
        FinSet {
            elems: self.elems.iter().map(|s| s.add(e)).collect(),
        }
    }

    /// `{s − e : s ∈ self}`.
    pub fn translate_back(&self, e: &E) -> Self {
        FinSet {
            elems: self.elems.iter().map(|s| s.sub(e)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &FinSet<E>) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.elems.iter()
    }
}

/// `S + T = {s + t}`.
pub fn sumset<E: Element>(s: &FinSet<E>, t: &FinSet<E>) -> FinSet<E> {
    let mut out = Vec::with_capacity(s.len() * t.len());
    for a in s.iter() {
        for b in t.iter() {
            out.push(a.add(b));
        }
    }
    out.sort();
    out.dedup();
    FinSet::from_sorted(out)
}

/// Sum of a list of sets; `{0}` for the empty list.
pub fn sum_all<'a, E: Element>(parts: impl IntoIterator<Item = &'a FinSet<E>>) -> FinSet<E> {
    parts
        .into_iter()
        .fold(FinSet::zero(), |acc, p| sumset(&acc, p))
}

impl<E: Element> fmt::Display for FinSet<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl<E: Element> fmt::Debug for FinSet<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<E: Element> FromStr for FinSet<E> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| {
                Error::invalid(format!("set literal `{t}` must be wrapped in braces"))
            })?;
        if inner.trim().is_empty() {
            return Err(Error::invalid("finite sets must be nonempty"));
        }
        let items = split_top_level(inner)
            .into_iter()
            .map(|(_, item)| item.trim().parse::<E>())
            .collect::<Result<Vec<E>>>()?;
        FinSet::new(items)
    }
}
