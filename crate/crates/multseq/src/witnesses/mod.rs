//! Constructive certificates about multiplicative sign sequences: Bezout
//! and chained-alignment solvers over prime-power moduli, periodicity
//! refutations, and the factor-count witness reports built on top of them.

mod linear;
mod period;
mod report;

pub use linear::{bezout_solve, crt_align, BezoutWitness, CrtWitness};
pub use period::{disprove_period, PeriodCounterexample};
pub use report::{build_witness_general, build_witness_t2, WitnessFactor, WitnessReport};
