//! Exact arithmetic and search tools for finitary power monoids of
//! Puiseux and rank-2 lexicographic monoids.

pub mod arith;
pub mod atomicity;
pub mod budget;
pub mod element;
pub mod error;
pub mod mcd;
pub mod monoid;
pub mod powmon;
pub mod verify;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use element::Element;
pub use error::{Error, Location, Result};
