//! Core sequence model: values, prime assignments, sequence specs, symbol
//! words, and evaluation (pointwise and sieved).

mod primes;
mod sieve;
mod spec;
mod value;
mod word;

pub use primes::is_prime;
pub use sieve::max_valuation_in_ap;
pub use spec::{valuation, ApTransform, PrimeAssignment, SequenceSpec, DEFAULT_PREFIX_CAP};
pub use value::MultValue;
pub use word::SymbolWord;
