//! Exact and modular special values of the Riemann zeta function and of the
//! quadratic Dirichlet L-functions attached to real quadratic fields, together
//! with the machinery built on them:
//!
//! * [`irregularity`] computes indices of χ- and D-irregularity of a prime,
//! * [`search`] looks for large primes dividing `ζ_D(1−2m)` in a window `[P, cP]`,
//! * [`stats`] compares observed index distributions with the Poisson(1/2)
//!   prediction by a chi-squared test.
//!
//! Everything is deterministic. Batch work (scans, searches) is data parallel
//! through rayon when the `parallel` feature is enabled and falls back to plain
//! iterators otherwise; see [`Exec`].

pub mod arith;
pub mod bernoulli;
pub mod characters;
mod error;
mod exec;
pub mod irregularity;
pub mod lvalues;
pub mod search;
pub mod stats;

pub use arith::{Rational, Valuation};
pub use characters::FundamentalDiscriminant;
pub use error::{Error, Result};
pub use exec::Exec;
