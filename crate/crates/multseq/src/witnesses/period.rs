//! Constructive refutation of periodicity for the single-prime valuation
//! family: for any claimed period, an index where the sequence and its
//! shift disagree, found by steering the valuation rather than scanning.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::linear::bezout_solve;
use crate::multcore::{is_prime, MultValue, SequenceSpec};
use crate::{Error, Result};

/// An index refuting "`T` is a period of `(a^{v_p(q*n+b)})` past `skip`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCounterexample {
    pub period: u64,
    pub index: BigUint,
    pub value_at: MultValue,
    pub value_shifted: MultValue,
    pub skip: u64,
}

/// Produce an index `m > skip` with `a^{v_p(q*m+b)} != a^{v_p(q*(m+T)+b)}`,
/// refuting period `T` no matter how long an initial segment is excused.
///
/// Writing `T = p^k * T'` with `p` prime to `T'`, an index is steered to
/// valuation exactly `k + 1`; adding `T` then contributes only `p^k`-many
/// factors, dropping the valuation to exactly `k`, and the two powers of `a`
/// differ whenever `a` is not the identity.
pub fn disprove_period(
    p: u64,
    q: u64,
    b: u64,
    a: MultValue,
    modulus: u32,
    period: u64,
    skip: u64,
) -> Result<PeriodCounterexample> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if q == 0 || b == 0 {
        return Err(Error::InvalidInput("need q >= 1 and b >= 1".into()));
    }
    if q % p == 0 {
        return Err(Error::InvalidInput(format!("p = {p} must not divide q = {q}")));
    }
    if period == 0 {
        return Err(Error::InvalidInput("a period is positive by definition".into()));
    }
    let Some(order) = a.order(modulus) else {
        return Err(Error::InvalidInput("zero is not a unit; the family needs a^v".into()));
    };
    if order < 2 {
        return Err(Error::InvalidInput(
            "a = 1 makes the sequence constant, hence genuinely periodic".into(),
        ));
    }

    // period = p^k * rest with p not dividing rest
    let mut k = 0u32;
    let mut rest = period;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    let p_pow = BigUint::from(p).pow(k + 1);

    // n*p^(k+1) - m*q = b, both factors past the excused segment
    let solution = bezout_solve(
        &p_pow,
        &BigUint::from(q),
        &BigInt::from(b),
        &BigInt::from(skip),
    )?;
    let (mut n, mut m) = (solution.k, solution.l);
    // keep v_p(n) = 0 so the steered valuation is exact; stepping m by
    // p^(k+1) steps n by q, which is invertible mod p
    while n.mod_floor(&BigInt::from(p)).to_u64() == Some(0) {
        n += BigInt::from(q);
        m += BigInt::from(p_pow.clone());
    }

    let index = m.to_biguint().expect("m > skip >= 0");
    let spec = build_family_spec(p, q, b, a, modulus)?;
    let value_at = spec.eval_at(&index)?;
    let value_shifted = spec.eval_at(&(&index + period))?;
    if value_at == value_shifted {
        return Err(Error::VerificationFailed(format!(
            "u({index}) = u({index} + {period}); the steering argument broke down"
        )));
    }
    Ok(PeriodCounterexample { period, index, value_at, value_shifted, skip })
}

fn build_family_spec(p: u64, q: u64, b: u64, a: MultValue, modulus: u32) -> Result<SequenceSpec> {
    let MultValue::Unit(e) = a else {
        return Err(Error::InvalidInput("family value must be a unit".into()));
    };
    let units = BTreeMap::from([(p, e % modulus)]);
    SequenceSpec::from_parts(modulus, units, vec![])?.ap_subsequence(q, b)
}
