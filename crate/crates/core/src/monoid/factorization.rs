use std::fmt;

use crate::element::Element;

/// A multiset of atoms, stored as `(atom, multiplicity)` pairs sorted by
/// atom with every multiplicity at least one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization<E> {
    parts: Vec<(E, u64)>,
}

impl<E: Element> Factorization<E> {
    pub fn new(parts: impl IntoIterator<Item = (E, u64)>) -> Self {
        let mut parts: Vec<(E, u64)> = parts.into_iter().filter(|(_, c)| *c > 0).collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(E, u64)> = Vec::with_capacity(parts.len());
        for (a, c) in parts {
            match merged.last_mut() {
                Some((last, n)) if *last == a => *n += c,
                _ => merged.push((a, c)),
            }
        }
        Factorization { parts: merged }
    }

    pub fn empty() -> Self {
        Factorization { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[(E, u64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of atoms counted with multiplicity.
    pub fn length(&self) -> u64 {
        self.parts.iter().map(|(_, c)| c).sum()
    }

    pub fn multiplicity(&self, atom: &E) -> u64 {
        self.parts
            .iter()
            .find(|(a, _)| a == atom)
            .map_or(0, |(_, c)| *c)
    }

    /// The element this factorization sums to.
    pub fn value(&self) -> E {
        self.parts
            .iter()
            .fold(E::zero(), |acc, (a, c)| acc.add(&a.times(*c)))
    }

    /// Atoms in ascending order, repeated by multiplicity.
    pub fn atoms_flat(&self) -> Vec<E> {
        self.parts
            .iter()
            .flat_map(|(a, c)| std::iter::repeat_n(a.clone(), *c as usize))
            .collect()
    }

    /// Sum of every sub-multiset. `visit` is called once per sub-multiset
    /// (duplicates between sub-multisets are possible).
    pub fn for_each_subsum(&self, mut visit: impl FnMut(&E) -> bool) -> bool {
        let mut counts = vec![0u64; self.parts.len()];
        loop {
            let value = self
                .parts
                .iter()
                .zip(&counts)
                .fold(E::zero(), |acc, ((a, _), c)| acc.add(&a.times(*c)));
            if !visit(&value) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == counts.len() {
                    return true;
                }
                if counts[i] < self.parts[i].1 {
                    counts[i] += 1;
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }
}

impl<E: Element> fmt::Display for Factorization<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("empty");
        }
        for (i, (a, c)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let shown = a.to_string();
            if shown.starts_with('(') {
                write!(f, "{c}*{shown}")?;
            } else {
                write!(f, "{c}*({shown})")?;
            }
        }
        Ok(())
    }
}

impl<E: Element> fmt::Debug for Factorization<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
