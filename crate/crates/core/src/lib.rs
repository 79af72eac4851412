//! Exact arithmetic in the nine imaginary quadratic rings of integers with
//! unique factorization, the unitary divisor functions `δ*_n` and `I*_n`
//! over them, and a search engine for elements with `I*_n(z) = t`.

pub mod error;
pub mod factor;
pub mod primes;
pub mod radical;
pub mod ring;
pub mod search;
mod syntax;
pub mod udf;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{factor_element, factor_int, Factorization, IntFactorization};
pub use primes::{classify, prime_above, PrimeClass, PrimeKind, PrimeWitness};
pub use radical::RadicalValue;
pub use ring::{QInt, RingId, UnitIndex};
