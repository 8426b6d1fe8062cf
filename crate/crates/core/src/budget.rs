use crate::error::{Error, Result};

/// Default node allowance for a single query.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Node counter threaded through every search. Exhaustion is reported as
/// [`Error::BudgetExceeded`], never folded into a negative answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.charge(1)
    }

    pub fn charge(&mut self, nodes: u64) -> Result<()> {
        self.used = self.used.saturating_add(nodes);
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                limit: self.limit,
                progress: 0,
            })
        } else {
            Ok(())
        }
    }

    /// A fresh budget with the same limit, for an independent sub-query.
    pub fn fresh(&self) -> Self {
        Budget::new(self.limit)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
