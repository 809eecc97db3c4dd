//! Automaticity probes: k-kernel exploration over materialized prefixes,
//! an exact automaton for the single-prime valuation family, and the
//! multiplicative-independence predicate those results hinge on.

mod dfao;
mod indep;
mod kernel;

pub use dfao::{build_dfao_vp, Dfao};
pub use indep::{multiplicatively_independent, primitive_base};
pub use kernel::{
    kernel_explore, ExceededReason, KernelNode, KernelResult, DEFAULT_MIN_WINDOW,
};
