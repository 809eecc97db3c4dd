//! Exact subword-complexity measurement on materialized words: per-length
//! distinct-factor counts, the eventual-periodicity threshold test, the
//! product bound relating a pointwise product to its factors, and growth
//! exponent estimation on log-log data.

mod automaton;
mod fit;

use num_bigint::BigUint;

pub use automaton::FactorIndex;
pub use fit::{dyadic_grid, fit_exponent, ExponentFit};

use crate::multcore::SymbolWord;
use crate::{Error, Result};

/// Distinct-factor counts `p(n)` of one materialized word, for `1 <= n <=
/// n_max`, tagged with the prefix length, index origin, and the fingerprint
/// of the producing spec so that profiles from different sources cannot be
/// compared by accident.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    fingerprint: String,
    prefix_len: usize,
    origin: BigUint,
    counts: Vec<u64>,
}

impl ComplexityProfile {
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn origin(&self) -> &BigUint {
        &self.origin
    }

    pub fn n_max(&self) -> usize {
        self.counts.len()
    }

    /// `p(n)`. Panics outside `1..=n_max`; the profile simply has no data
    /// there.
    pub fn count(&self, n: usize) -> u64 {
        assert!(n >= 1 && n <= self.counts.len(), "length {n} outside profile range");
        self.counts[n - 1]
    }

    /// Counts indexed by `n - 1`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// CSV rows `n,count` under a comment line recording the provenance.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# N={} origin={} fingerprint={}\nn,count\n",
            self.prefix_len, self.origin, self.fingerprint
        );
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{c}\n", i + 1));
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn for_tests(fingerprint: &str, prefix_len: usize, counts: Vec<u64>) -> Self {
        use num_traits::Zero;
        ComplexityProfile {
            fingerprint: fingerprint.to_string(),
            prefix_len,
            origin: BigUint::zero(),
            counts,
        }
    }
}

/// Measure the exact distinct-factor counts of `word` for all lengths up to
/// `n_max`, in time linear in the word. `fingerprint` labels the source.
pub fn complexity_profile(
    word: &SymbolWord,
    n_max: usize,
    fingerprint: &str,
) -> Result<ComplexityProfile> {
    if n_max == 0 {
        return Err(Error::InvalidInput("profile needs at least length 1".into()));
    }
    if n_max > word.len() {
        return Err(Error::WordTooShort { needed: n_max, actual: word.len() });
    }
    let index = FactorIndex::build(word);
    Ok(ComplexityProfile {
        fingerprint: fingerprint.to_string(),
        prefix_len: word.len(),
        origin: word.origin().clone(),
        counts: index.counts_per_length(n_max),
    })
}

/// Outcome of scanning a profile for the eventual-periodicity threshold
/// `p(n) <= n`.
///
/// On a finite prefix, `Triggered` means the underlying sequence is
/// ultimately periodic or the prefix was too short to separate factors;
/// `NotTriggered` certifies `p(n) >= n + 1` for every measured length, which
/// for the full sequence rules out ultimate periodicity at those scales.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorseHedlund {
    Triggered(usize),
    NotTriggered,
}

pub fn morse_hedlund_check(profile: &ComplexityProfile) -> MorseHedlund {
    for n in 1..=profile.n_max() {
        if profile.count(n) <= n as u64 {
            return MorseHedlund::Triggered(n);
        }
    }
    MorseHedlund::NotTriggered
}

/// Check `p0(n) <= p1(n) * ... * pk(n)` for every length all the profiles
/// cover. When word 0 is the pointwise product of the factor words, every
/// length-n factor of word 0 is determined by choosing one factor of each
/// word i at the same position, so the inequality must hold.
pub fn product_bound_check(
    product: &ComplexityProfile,
    factors: &[&ComplexityProfile],
) -> Result<bool> {
    if factors.is_empty() {
        return Err(Error::InvalidInput("no factor profiles given".into()));
    }
    for f in factors {
        if f.prefix_len != product.prefix_len {
            return Err(Error::ProfileMismatch(format!(
                "prefix lengths differ: {} vs {}",
                f.prefix_len, product.prefix_len
            )));
        }
        if f.origin != product.origin {
            return Err(Error::ProfileMismatch(format!(
                "origins differ: {} vs {}",
                f.origin, product.origin
            )));
        }
    }
    let n_common = factors
        .iter()
        .map(|f| f.n_max())
        .min()
        .expect("at least one factor")
        .min(product.n_max());
    for n in 1..=n_common {
        let bound = factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.count(n) as u128));
        if (product.count(n) as u128) > bound {
            return Ok(false);
        }
    }
    Ok(true)
}
