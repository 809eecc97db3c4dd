//! Exact linear solvers behind the alignment arguments: a Bezout solver
//! whose solutions are shifted above a floor, and its chained form aligning
//! one coefficient against many pairwise coprime moduli at once.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A solution of `k*p - l*q = target` with both unknowns strictly above
/// `min_bound`, canonical in the sense that no smaller shift of the base
/// solution satisfies the floor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutWitness {
    pub k: BigInt,
    pub l: BigInt,
    pub p: BigUint,
    pub q: BigUint,
    pub target: BigInt,
    pub min_bound: BigInt,
}

impl BezoutWitness {
    /// Exact replay of the defining equation and floor constraints.
    pub fn verify(&self) -> bool {
        let p = BigInt::from(self.p.clone());
        let q = BigInt::from(self.q.clone());
        &self.k * p - &self.l * q == self.target
            && self.k > self.min_bound
            && self.l > self.min_bound
    }
}

/// Solve `k*p - l*q = target` in integers with `k > min_bound` and
/// `l > min_bound`, using an extended-gcd base solution shifted by
/// `(k + s*q, l + s*p)` for the least adequate `s` (possibly negative, so
/// oversized base solutions shrink to the canonical one).
pub fn bezout_solve(
    p: &BigUint,
    q: &BigUint,
    target: &BigInt,
    min_bound: &BigInt,
) -> Result<BezoutWitness> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::InvalidInput("moduli must be positive".into()));
    }
    let p_int = BigInt::from(p.clone());
    let q_int = BigInt::from(q.clone());
    let gcd = p_int.extended_gcd(&q_int);
    if !gcd.gcd.is_one() {
        return Err(Error::NotCoprime { a: p.to_string(), b: q.to_string() });
    }
    // x*p + y*q = 1, so (x*target)*p - (-y*target)*q = target
    let k0 = &gcd.x * target;
    let l0 = -&gcd.y * target;
    debug_assert_eq!(&k0 * &p_int - &l0 * &q_int, *target);

    let floor = min_bound + 1u32;
    let s_k = (&floor - &k0).div_ceil(&q_int);
    let s_l = (&floor - &l0).div_ceil(&p_int);
    let s = s_k.max(s_l);
    let witness = BezoutWitness {
        k: k0 + &s * &q_int,
        l: l0 + &s * &p_int,
        p: p.clone(),
        q: q.clone(),
        target: target.clone(),
        min_bound: min_bound.clone(),
    };
    debug_assert!(witness.verify());
    Ok(witness)
}

/// A solution of the simultaneous equations `k[0]*moduli[0] - k[i]*moduli[i]
/// = targets[i-1]` for `i = 1..`, with every coefficient positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtWitness {
    pub k: Vec<BigInt>,
    pub moduli: Vec<BigUint>,
    pub targets: Vec<BigInt>,
}

impl CrtWitness {
    pub fn verify(&self) -> bool {
        if self.k.len() != self.moduli.len() || self.targets.len() + 1 != self.k.len() {
            return false;
        }
        if self.k.iter().any(|k| !k.is_positive()) {
            return false;
        }
        let head = &self.k[0] * BigInt::from(self.moduli[0].clone());
        (1..self.k.len()).all(|i| {
            &head - &self.k[i] * BigInt::from(self.moduli[i].clone()) == self.targets[i - 1]
        })
    }
}

/// Align one coefficient against many: find positive `k[0..=t]` with
/// `k[0]*moduli[0] - k[i]*moduli[i] = targets[i-1]` for all `i`. Moduli must
/// be pairwise coprime. Solved pairwise first, then each new equation is
/// lifted with the product of the moduli handled so far, which leaves the
/// settled equations untouched.
pub fn crt_align(moduli: &[BigUint], targets: &[BigInt]) -> Result<CrtWitness> {
    if moduli.len() < 2 {
        return Err(Error::InvalidInput("alignment needs at least two moduli".into()));
    }
    if targets.len() + 1 != moduli.len() {
        return Err(Error::InvalidInput(format!(
            "{} moduli take {} targets, got {}",
            moduli.len(),
            moduli.len() - 1,
            targets.len()
        )));
    }
    for i in 0..moduli.len() {
        if moduli[i].is_zero() {
            return Err(Error::InvalidInput("moduli must be positive".into()));
        }
        for j in i + 1..moduli.len() {
            if !moduli[i].gcd(&moduli[j]).is_one() {
                return Err(Error::NotCoprime {
                    a: moduli[i].to_string(),
                    b: moduli[j].to_string(),
                });
            }
        }
    }

    let ints: Vec<BigInt> = moduli.iter().map(|m| BigInt::from(m.clone())).collect();
    let zero = BigInt::zero();
    let base = bezout_solve(&moduli[0], &moduli[1], &targets[0], &zero)?;
    let mut k = vec![base.k, base.l];

    for j in 2..moduli.len() {
        // settled product q_0*...*q_{j-1}, coprime to the next modulus
        let settled: BigInt = ints[..j].iter().product();
        let settled_mag = settled.magnitude().clone();
        let shifted_target = &targets[j - 1] - &k[0] * &ints[0];
        let lift = bezout_solve(&settled_mag, &moduli[j], &shifted_target, &zero)?;
        for (i, coefficient) in k.iter_mut().enumerate() {
            let cofactor: BigInt =
                (0..j).filter(|&m| m != i).map(|m| &ints[m]).product();
            *coefficient += &lift.k * cofactor;
        }
        k.push(lift.l);
    }

    let witness = CrtWitness { k, moduli: moduli.to_vec(), targets: targets.to_vec() };
    if !witness.verify() {
        return Err(Error::VerificationFailed(
            "alignment coefficients failed replay; this is a solver bug".into(),
        ));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn i(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn canonical_solutions() {
        let w = bezout_solve(&u(2), &u(3), &i(1), &i(0)).unwrap();
        assert_eq!((w.k, w.l), (i(2), i(1)));

        // the least shift putting both strictly above 5
        let w = bezout_solve(&u(2), &u(3), &i(1), &i(5)).unwrap();
        assert_eq!((w.k.clone(), w.l.clone()), (i(11), i(7)));
        assert!(w.verify());

        // negative targets and oversized base solutions normalize too
        let w = bezout_solve(&u(7), &u(5), &i(-127), &i(10)).unwrap();
        assert!(w.verify());
        let smaller = BezoutWitness { k: &w.k - 5u32, l: &w.l - 7u32, ..w.clone() };
        assert!(!smaller.verify(), "one shift down must break the floor");
    }

    #[test]
    fn rejects_common_factors() {
        assert!(matches!(
            bezout_solve(&u(5), &u(5), &i(1), &i(0)),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            crt_align(&[u(4), u(6), u(9)], &[i(1), i(2)]),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn alignment_follows_the_lifting_induction() {
        let w = crt_align(&[u(5), u(2), u(3)], &[i(1), i(2)]).unwrap();
        assert!(w.verify());
        // the lift-based solution lands above the minimal one a direct
        // search finds (k = (1, 2, 1)); both satisfy the same equations
        assert_eq!(w.k, vec![i(7), i(17), i(11)]);
        let searched = CrtWitness {
            k: vec![i(1), i(2), i(1)],
            moduli: vec![u(5), u(2), u(3)],
            targets: vec![i(1), i(2)],
        };
        assert!(searched.verify());
    }

    #[test]
    fn zero_targets_admit_the_swap_solution() {
        let w = crt_align(&[u(7), u(11)], &[i(0)]).unwrap();
        assert!(w.verify());
        let swap = CrtWitness { k: vec![i(11), i(7)], moduli: vec![u(7), u(11)], targets: vec![i(0)] };
        assert!(swap.verify());
    }

    #[test]
    fn two_moduli_match_the_pair_solver() {
        let pair = bezout_solve(&u(9), &u(16), &i(-4), &i(0)).unwrap();
        let chain = crt_align(&[u(9), u(16)], &[i(-4)]).unwrap();
        assert_eq!(chain.k, vec![pair.k, pair.l]);
    }

    #[test]
    fn unit_moduli_are_fine() {
        // degenerate but legal: modulus 1 absorbs any target
        let w = crt_align(&[u(1), u(1), u(1)], &[i(3), i(-2)]).unwrap();
        assert!(w.verify());
    }

    proptest! {
        #[test]
        fn solutions_always_replay(
            p in 1u64..2000,
            q in 1u64..2000,
            target in -100_000i64..100_000,
            bound in -50i64..1000,
        ) {
            prop_assume!(u(p).gcd(&u(q)).is_one());
            let w = bezout_solve(&u(p), &u(q), &i(target), &i(bound)).unwrap();
            prop_assert!(w.verify());
        }

        #[test]
        fn chains_always_replay(
            l1 in -10_000i64..10_000,
            l2 in -10_000i64..10_000,
            l3 in -10_000i64..10_000,
        ) {
            // fixed pairwise coprime moduli, arbitrary targets
            let moduli = [u(4), u(9), u(25), u(77)];
            let w = crt_align(&moduli, &[i(l1), i(l2), i(l3)]).unwrap();
            prop_assert!(w.verify());
        }
    }
}
