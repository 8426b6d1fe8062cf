//! The element types a backend can carry.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use crate::arith::{QPoint2, Rat};
use crate::error::Error;

/// An element of a reduced linearly ordered monoid embedded in a
/// torsion-free group: ordered, addable, subtractable in the ambient group.
pub trait Element:
    Clone + Ord + Eq + Hash + Debug + Display + FromStr<Err = Error> + Send + Sync + 'static
{
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// The `n`-fold sum `self + ... + self`.
    fn times(&self, n: u64) -> Self;
}

impl Element for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, n: u64) -> Self {
        self.mul_int(n)
    }
}

impl Element for QPoint2 {
    fn zero() -> Self {
        QPoint2::zero()
    }
    fn is_zero(&self) -> bool {
        QPoint2::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        QPoint2::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        QPoint2::sub(self, other)
    }
    fn times(&self, n: u64) -> Self {
        QPoint2::times(self, n)
    }
}

/// Split a comma-separated list at top level, ignoring commas nested in
/// parentheses. Returns `(byte offset, item)` pairs.
pub(crate) fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}
