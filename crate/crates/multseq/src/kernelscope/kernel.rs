//! Kernel exploration over a materialized word: breadth-first closure of the
//! affine index maps `n -> k*n + r`, with prefix-window equality standing in
//! for true sequence equality.

use std::collections::HashMap;

use crate::multcore::SymbolWord;
use crate::{Error, Result};

/// Window length used to compare subsequences unless the caller picks one.
pub const DEFAULT_MIN_WINDOW: usize = 64;

/// One discovered kernel element: the subsequence `n -> w(coefficient*n +
/// offset)`, identified by its first `window` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelNode {
    pub coefficient: u64,
    pub offset: u64,
    pub depth: usize,
    pub fingerprint: String,
}

/// Why an exploration stopped short of closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceededReason {
    /// More distinct subsequences than the state budget.
    StateBudget,
    /// The word ran out: a child subsequence had fewer than the comparison
    /// window's worth of positions, so its identity is undecidable here.
    DepthLimit,
}

/// Outcome of exploring the k-kernel of a word.
///
/// `Closed` is evidence, not proof: equality was only checked on the first
/// `window` positions of each subsequence, so sequences that diverge later
/// may have been merged. `Exceeded` is the reverse: every representative
/// found was pairwise separated on compared positions, so the count is a
/// certified lower bound on the true kernel size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelResult {
    Closed {
        representatives: Vec<KernelNode>,
        /// `transitions[rep][r]` = representative of `n -> k*n + r`.
        transitions: Vec<Vec<usize>>,
        window: usize,
    },
    Exceeded {
        bound: usize,
        depth_reached: usize,
        reason: ExceededReason,
    },
}

impl KernelResult {
    pub fn is_closed(&self) -> bool {
        matches!(self, KernelResult::Closed { .. })
    }
}

/// Explore the k-kernel of `word`, treating position `t` of the word as
/// index `t` of the sequence (pad the sequence so it starts at 0 first).
///
/// Subsequences are compared on exactly `min_window` leading symbols; two
/// nodes merge iff those windows agree. Exploration is breadth first with
/// digits in increasing order, so results are deterministic.
pub fn kernel_explore(
    word: &SymbolWord,
    k: u32,
    max_states: usize,
    min_window: usize,
) -> Result<KernelResult> {
    if k < 2 {
        return Err(Error::InvalidInput("kernel base k must be at least 2".into()));
    }
    if max_states == 0 || min_window == 0 {
        return Err(Error::InvalidInput("state budget and window must be positive".into()));
    }
    let needed = (k as usize).saturating_mul(min_window);
    if word.len() < needed {
        return Err(Error::WordTooShort { needed, actual: word.len() });
    }

    let symbols = word.symbols();
    let window_of = |coefficient: u64, offset: u64| -> Option<Vec<u8>> {
        let last = coefficient
            .checked_mul(min_window as u64 - 1)
            .and_then(|x| x.checked_add(offset))?;
        if last >= symbols.len() as u64 {
            return None;
        }
        Some(
            (0..min_window as u64)
                .map(|t| symbols[(coefficient * t + offset) as usize])
                .collect(),
        )
    };

    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut reps: Vec<KernelNode> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();

    let root_window = window_of(1, 0).expect("length was checked against k * min_window");
    seen.insert(root_window.clone(), 0);
    reps.push(KernelNode {
        coefficient: 1,
        offset: 0,
        depth: 0,
        fingerprint: render_window(word, &root_window),
    });

    let mut next = 0usize;
    while next < reps.len() {
        let (coefficient, offset, depth) =
            (reps[next].coefficient, reps[next].offset, reps[next].depth);
        let mut row = Vec::with_capacity(k as usize);
        for r in 0..k as u64 {
            let child_coefficient = match coefficient.checked_mul(k as u64) {
                Some(c) => c,
                None => {
                    return Ok(exceeded(&reps, ExceededReason::DepthLimit));
                }
            };
            let child_offset = coefficient * r + offset;
            let Some(w) = window_of(child_coefficient, child_offset) else {
                return Ok(exceeded(&reps, ExceededReason::DepthLimit));
            };
            let id = match seen.get(&w) {
                Some(&id) => id,
                None => {
                    if reps.len() == max_states {
                        return Ok(KernelResult::Exceeded {
                            bound: max_states,
                            depth_reached: depth + 1,
                            reason: ExceededReason::StateBudget,
                        });
                    }
                    let id = reps.len();
                    reps.push(KernelNode {
                        coefficient: child_coefficient,
                        offset: child_offset,
                        depth: depth + 1,
                        fingerprint: render_window(word, &w),
                    });
                    seen.insert(w, id);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
        next += 1;
    }

    Ok(KernelResult::Closed { representatives: reps, transitions, window: min_window })
}

fn exceeded(reps: &[KernelNode], reason: ExceededReason) -> KernelResult {
    KernelResult::Exceeded {
        bound: reps.len(),
        depth_reached: reps.iter().map(|r| r.depth).max().unwrap_or(0),
        reason,
    }
}

fn render_window(word: &SymbolWord, symbols: &[u8]) -> String {
    symbols
        .iter()
        .map(|&s| word.alphabet()[s as usize].to_string())
        .collect::<Vec<_>>()
        .join(",")
}
