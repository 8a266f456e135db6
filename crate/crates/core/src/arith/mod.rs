//! Exact integer and rational arithmetic, primes, and p-adic valuations.

mod modular;
mod primes;
mod rational;

pub use modular::{mod_inverse, mul_mod, pow_mod, FactorialTable};
pub use primes::{is_prime, odd_primes_below, primes_in_range, PrimeRange};
pub(crate) use rational::residue_of;
pub use rational::{valuation, valuation_int, Rational, Valuation};
