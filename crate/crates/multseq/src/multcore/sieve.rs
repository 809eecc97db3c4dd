//! Valuation sieving over an arithmetic progression of indices.
//!
//! A window of `len` terms of `(u(q*n + b))` starting at `n = start` is an
//! arithmetic progression `c0 + q*i`, `i < len`, in the underlying argument.
//! For each support prime `p` the positions divisible by `p^l` form a single
//! residue class mod `p^l` (or are constant), so the whole window costs about
//! `len / (p - 1)` marks per prime instead of a division per term.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::spec::SequenceSpec;
use super::value::MultValue;
use crate::{Error, Result};

/// Split a positive integer as `p^v * rest` with `p` not dividing `rest`.
fn split_valuation(p: u64, n: &BigUint) -> (u64, BigUint) {
    let p_big = BigUint::from(p);
    let mut rest = n.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = rest.div_rem(&p_big);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

fn inverse_mod(a: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    let g = BigInt::from(a.clone()).extended_gcd(&BigInt::from(modulus.clone()));
    if !g.gcd.is_one() {
        return None;
    }
    g.x.mod_floor(&BigInt::from(modulus.clone())).to_biguint()
}

/// Least `i >= 0` with `c + s*i = 0 mod p^l`, given `p` does not divide `s`.
fn class_start(c: &BigUint, s: u64, p_pow: &BigUint) -> BigUint {
    let inv = inverse_mod(&BigUint::from(s), p_pow).expect("s is a unit mod p^l");
    let residue = (c % p_pow) * inv % p_pow;
    if residue.is_zero() {
        residue
    } else {
        p_pow - residue
    }
}

/// Materialize the window of `len` values of `spec` starting at index
/// `start`. The caller has already validated `len > 0` and the origin bound.
pub(super) fn window_values(spec: &SequenceSpec, start: &BigUint, len: usize) -> Result<Vec<MultValue>> {
    let m = spec.modulus();
    let step = spec.ap().map_or(1, |t| t.q);
    let c0 = spec.underlying_index(start);
    debug_assert!(!c0.is_zero());

    let mut exp = vec![0u32; len];
    let mut zero = vec![false; len];

    for (p, value) in spec.assignment().support() {
        let (vq, q_hat) = if step == 1 { (0, 1) } else { split_u64(p, step) };
        let (vc, _) = split_valuation(p, &c0);

        if vc < vq {
            // every q*i term drowns the offset: valuation is vc throughout
            match value {
                MultValue::Zero if vc > 0 => return Ok(vec![MultValue::Zero; len]),
                MultValue::Zero => {}
                MultValue::Unit(e) => {
                    let add = ((e as u64 * (vc % m as u64)) % m as u64) as u32;
                    if add != 0 {
                        for slot in exp.iter_mut() {
                            *slot = (*slot + add) % m;
                        }
                    }
                }
            }
            continue;
        }

        // c0 + q*i = p^vq * (c_hat + q_hat*i) with p coprime to q_hat
        let p_pow_vq = BigUint::from(p).pow(u32::try_from(vq).expect("valuation of a u64 fits"));
        let c_hat = &c0 / &p_pow_vq;

        match value {
            MultValue::Zero => {
                if vq > 0 {
                    return Ok(vec![MultValue::Zero; len]);
                }
                let p_big = BigUint::from(p);
                let first = class_start(&c_hat, q_hat, &p_big);
                if let Some(first) = first.to_usize().filter(|&f| f < len) {
                    let stride = usize::try_from(p).unwrap_or(usize::MAX);
                    for slot in zero[first..].iter_mut().step_by(stride) {
                        *slot = true;
                    }
                }
            }
            MultValue::Unit(e) => {
                let base = ((e as u64 * (vq % m as u64)) % m as u64) as u32;
                if base != 0 {
                    for slot in exp.iter_mut() {
                        *slot = (*slot + base) % m;
                    }
                }
                let mut p_pow = BigUint::from(p);
                loop {
                    let first = class_start(&c_hat, q_hat, &p_pow);
                    let Some(first) = first.to_usize().filter(|&f| f < len) else {
                        break;
                    };
                    let stride = p_pow.to_usize().unwrap_or(usize::MAX);
                    for slot in exp[first..].iter_mut().step_by(stride) {
                        *slot = (*slot + e) % m;
                    }
                    p_pow *= p;
                }
            }
        }
    }

    let power_mod = (spec.power() % m as u64) as u32;
    Ok(exp
        .into_iter()
        .zip(zero)
        .map(|(e, z)| {
            if z {
                MultValue::Zero
            } else {
                MultValue::Unit(((e as u64 * power_mod as u64) % m as u64) as u32)
            }
        })
        .collect())
}

fn split_u64(p: u64, n: u64) -> (u64, u64) {
    debug_assert!(n > 0);
    let mut rest = n;
    let mut v = 0;
    while rest % p == 0 {
        rest /= p;
        v += 1;
    }
    (v, rest)
}

/// Largest `p`-adic valuation of `q*n + b` over `n < count`, without
/// scanning: the members of each valuation level form one residue class.
/// Needs `b >= 1` so every argument is positive.
pub fn max_valuation_in_ap(p: u64, q: u64, b: u64, count: u64) -> Result<u64> {
    if !super::primes::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if q == 0 || b == 0 {
        return Err(Error::InvalidInput("need q >= 1 and b >= 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidInput("empty range has no maximum".into()));
    }
    let (vq, q_hat) = split_u64(p, q);
    let (vb, b_hat) = split_u64(p, b);
    if vb < vq {
        return Ok(vb);
    }
    // q*n + b = p^vq * (b'*p^(vb-vq) + q_hat*n); fold the leftover power of p
    // back into the offset so the step is coprime to p
    let c = BigUint::from(b_hat) * BigUint::from(p).pow(u32::try_from(vb - vq).expect("fits"));
    let count_big = BigUint::from(count);
    let mut level = 0u64;
    let mut p_pow = BigUint::from(p);
    loop {
        if class_start(&c, q_hat, &p_pow) >= count_big {
            return Ok(vq + level);
        }
        level += 1;
        p_pow *= p;
    }
}
