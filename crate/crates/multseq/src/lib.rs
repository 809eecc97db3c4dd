//! Tools for completely multiplicative sequences that take the value 0 or a
//! root of unity on all but finitely many primes.
//!
//! Such a sequence is pinned down by a [`multcore::PrimeAssignment`]: a group
//! order `m` and a finite map from primes to either zero or a nontrivial
//! `m`-th root of unity. Everything else here consumes that description:
//!
//! * [`multcore`] evaluates terms (including at arbitrary-precision indices),
//!   materializes prefixes and windows by valuation sieving, and applies
//!   subsequence / power / coding transforms.
//! * [`wordstats`] counts distinct factors of every length exactly via a
//!   suffix automaton, and fits growth exponents on log-log grids.
//! * [`kernelscope`] explores kernels of words under `n -> k*n + r`
//!   subsampling and builds digit automata for valuation-power families.
//! * [`witnesses`] constructs explicit families of pairwise distinct factors
//!   certifying polynomial complexity growth, plus periodicity disprovers.
//! * [`dirichlet`] checks the Euler-product identity numerically and predicts
//!   pole ordinates of the associated Dirichlet series.

pub mod dirichlet;
pub mod kernelscope;
pub mod multcore;
pub mod witnesses;
pub mod wordstats;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A sequence description failed validation (bad prime, stored unit-0
    /// value, malformed JSON, inconsistent transform).
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// An operation precondition not tied to a spec was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An index or parameter lies outside the domain of the sequence or
    /// function being evaluated.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A request exceeded the configured resource cap.
    #[error("resource limit: requested {requested}, cap {cap}")]
    ResourceLimit { requested: usize, cap: usize },

    /// Two quantities that must be coprime are not.
    #[error("not coprime: gcd({a}, {b}) > 1")]
    NotCoprime { a: String, b: String },

    /// A word is too short for the requested comparison depth.
    #[error("word too short: need at least {needed} symbols, have {actual}")]
    WordTooShort { needed: usize, actual: usize },

    /// Profiles passed to a comparison disagree on length, origin, or source.
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),

    /// A regression grid is too degenerate to fit.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A search exhausted its prefix budget before finding enough factors.
    #[error("prefix budget exhausted: tried up to {last_tried} of budget {budget}")]
    BudgetExhausted { last_tried: usize, budget: usize },

    /// A constructed object failed its own replay verification.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// Integer overflow in a derived quantity.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
