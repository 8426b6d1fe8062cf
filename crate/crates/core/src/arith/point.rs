use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::rat::Rat;
use crate::error::{Error, Result};

/// A point of Q^2 ordered lexicographically with priority on `y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoint2 {
    pub x: Rat,
    pub y: Rat,
}

impl QPoint2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        QPoint2 { x, y }
    }

    pub fn zero() -> Self {
        QPoint2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Strictly positive in the lexicographic order.
    pub fn is_positive(&self) -> bool {
        self.y.is_positive() || (self.y.is_zero() && self.x.is_positive())
    }

    pub fn add(&self, o: &QPoint2) -> QPoint2 {
        QPoint2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &QPoint2) -> QPoint2 {
        QPoint2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn times(&self, n: u64) -> QPoint2 {
        QPoint2::new(self.x.mul_int(n), self.y.mul_int(n))
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, o: &QPoint2) -> bool {
        self.x <= o.x && self.y <= o.y
    }
}

impl Ord for QPoint2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y).then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for QPoint2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QPoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for QPoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QPoint2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::invalid(format!("malformed point literal `{t}`")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::invalid(format!("point literal `{t}` needs two coordinates")))?;
        Ok(QPoint2::new(x.parse()?, y.parse()?))
    }
}
