//! Exact rationals, p-adic valuations and deterministic prime streams.

pub mod padic;
pub mod point;
pub mod primes;
pub mod rat;

pub use padic::{is_prime, vp, PadicVal};
pub use point::QPoint2;
pub use primes::{odd_primes, primes_geq};
pub use rat::{lcm_of_denominators, Rat};
