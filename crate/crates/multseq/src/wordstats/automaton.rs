//! Suffix automaton over a symbol word, specialized for counting distinct
//! factors. Construction is the standard online algorithm; states live in
//! flat arrays with a fixed transition stride because the alphabets here
//! never exceed a handful of symbols.

use crate::multcore::SymbolWord;

const ABSENT: u32 = u32::MAX;

/// Index of every distinct factor of a word, queryable by length.
///
/// Each state represents a class of factors sharing their occurrence set;
/// the class covers the length interval `(len(link(s)), len(s)]`, so the
/// number of distinct factors of each length falls out of one difference
/// array over those intervals.
pub struct FactorIndex {
    stride: usize,
    len: Vec<u32>,
    link: Vec<u32>,
    trans: Vec<u32>,
    word_len: usize,
}

impl FactorIndex {
    pub fn build(word: &SymbolWord) -> FactorIndex {
        let stride = word.alphabet_size().max(1);
        let capacity = 2 * word.len() + 2;
        let mut index = FactorIndex {
            stride,
            len: Vec::with_capacity(capacity),
            link: Vec::with_capacity(capacity),
            trans: Vec::with_capacity(capacity * stride),
            word_len: word.len(),
        };
        index.push_state(0, ABSENT, None);

        let mut last = 0usize;
        for &symbol in word.symbols() {
            let c = symbol as usize;
            let cur = index.push_state(index.len[last] + 1, 0, None);
            let mut walker = Some(last);
            while let Some(s) = walker {
                if index.trans[s * stride + c] != ABSENT {
                    break;
                }
                index.trans[s * stride + c] = cur as u32;
                walker = index.parent(s);
            }
            if let Some(s) = walker {
                let q = index.trans[s * stride + c] as usize;
                if index.len[q] == index.len[s] + 1 {
                    index.link[cur] = q as u32;
                } else {
                    let clone = index.push_state(index.len[s] + 1, index.link[q], Some(q));
                    let mut redirect = Some(s);
                    while let Some(r) = redirect {
                        if index.trans[r * stride + c] != q as u32 {
                            break;
                        }
                        index.trans[r * stride + c] = clone as u32;
                        redirect = index.parent(r);
                    }
                    index.link[q] = clone as u32;
                    index.link[cur] = clone as u32;
                }
            }
            last = cur;
        }
        index
    }

    fn push_state(&mut self, len: u32, link: u32, clone_of: Option<usize>) -> usize {
        self.len.push(len);
        self.link.push(link);
        match clone_of {
            Some(src) => {
                let row = src * self.stride..(src + 1) * self.stride;
                self.trans.extend_from_within(row);
            }
            None => self.trans.resize(self.trans.len() + self.stride, ABSENT),
        }
        self.len.len() - 1
    }

    fn parent(&self, s: usize) -> Option<usize> {
        match self.link[s] {
            ABSENT => None,
            p => Some(p as usize),
        }
    }

    pub fn state_count(&self) -> usize {
        self.len.len()
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// Total number of distinct nonempty factors.
    pub fn total_distinct(&self) -> u64 {
        (1..self.len.len())
            .map(|s| (self.len[s] - self.len[self.link[s] as usize]) as u64)
            .sum()
    }

    /// Distinct factor counts for lengths `1..=n_max`; entry `i` is the
    /// count for length `i + 1`. Lengths beyond the word come out 0.
    pub fn counts_per_length(&self, n_max: usize) -> Vec<u64> {
        let mut diff = vec![0i64; n_max + 2];
        for s in 1..self.len.len() {
            let lo = self.len[self.link[s] as usize] as usize + 1;
            if lo > n_max {
                continue;
            }
            let hi = (self.len[s] as usize).min(n_max);
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
        let mut counts = Vec::with_capacity(n_max);
        let mut running = 0i64;
        for d in &diff[1..=n_max] {
            running += d;
            counts.push(running as u64);
        }
        counts
    }

    /// Whether the symbol string occurs as a factor.
    pub fn contains(&self, symbols: &[u8]) -> bool {
        let mut state = 0usize;
        for &c in symbols {
            let next = self.trans[state * self.stride + c as usize];
            if next == ABSENT {
                return false;
            }
            state = next as usize;
        }
        true
    }
}
