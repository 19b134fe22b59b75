//! Construction and verification of unique representation bases of the
//! integers.
//!
//! A set `A` of integers is a unique representation basis when every integer
//! `n` has exactly one representation `n = a + a'` with `a <= a'` in `A`. The
//! [`builder`] grows such a basis in rounds: a pair-fill step repairs the
//! smallest unrepresented integer, and an injection step adds a large
//! two-sided Sidon set taken from Bose's construction, so that
//! `A(-x, x) >= (1 - eps) sqrt(x)` at a checkpoint `x = p^2`. Every stage is
//! recorded in a transcript that [`verify`] can replay independently.

pub mod builder;
mod decimal;
pub mod error;
pub mod field;
pub mod intset;
pub mod prime;
pub mod rational;
pub mod sidon;
pub mod split;
pub mod verify;

pub use error::{Error, Result};
pub use intset::IntegerSet;
pub use rational::Epsilon;
