//! Multiplicative independence of two integers: `k` and `l` are dependent
//! exactly when some `k^a = l^b` with positive `a`, `b`, which happens iff
//! both are powers of one common integer.

use crate::{Error, Result};

fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Exact integer e-th root, if one exists. The float estimate can be off by
/// an ulp near perfect powers, so neighbors are checked too.
fn nth_root_exact(x: u64, e: u32) -> Option<u64> {
    debug_assert!(e >= 2 && x >= 2);
    let guess = (x as f64).powf(1.0 / e as f64).round() as u64;
    for candidate in guess.saturating_sub(2)..=guess.saturating_add(2) {
        if candidate >= 2 && pow_checked(candidate, e) == Some(x) {
            return Some(candidate);
        }
    }
    None
}

/// Smallest integer `g` such that `x` is a power of `g` (i.e. `x = g^e` with
/// `e` as large as possible). `x` itself when it is not a perfect power.
pub fn primitive_base(x: u64) -> u64 {
    debug_assert!(x >= 2);
    for e in (2..=63u32).rev() {
        if pow_checked(2, e).map_or(true, |floor| floor > x) {
            continue;
        }
        if let Some(root) = nth_root_exact(x, e) {
            return root;
        }
    }
    x
}

/// Whether no positive powers of `k` and `l` coincide. Two integers share a
/// power exactly when they are powers of the same primitive base.
pub fn multiplicatively_independent(k: u64, l: u64) -> Result<bool> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidInput(
            "independence is about integers >= 2; powers of 0 and 1 are degenerate".into(),
        ));
    }
    Ok(primitive_base(k) != primitive_base(l))
}
