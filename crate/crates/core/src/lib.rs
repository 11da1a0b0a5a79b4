//! Exact counts of the groups of order `n` for every `n` with at most four
//! prime factors (and for `p^5`), together with two brute-force oracles used
//! to check them: a subgroup-class counter for `GL(d, p)` and an exhaustive
//! Cayley-table enumerator for tiny orders.

pub mod arith;
pub mod cayley;
pub mod error;
pub mod formulas;
pub mod gl;
pub mod limits;
pub mod verify;

pub use arith::{classify_shape, factorize, Factorization, OrderShape};
pub use error::CensusError;
pub use formulas::{count_groups, GroupCount, Rational, Term};
pub use limits::Limits;
