//! Explicit automaton for the family `n -> a^{v_p(q*n + b)}`: a DFAO that
//! reads base-p digits least significant first and reproduces the sequence
//! exactly, index 0 included (under the global u(0) = 1 padding).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::multcore::{is_prime, MultValue};
use crate::{Error, Result};

/// Hard ceiling on transition-table cells (states times digits).
const MAX_TRANSITION_CELLS: usize = 1 << 24;

/// Deterministic finite automaton with output, digits read LSD-first.
pub struct Dfao {
    base: u64,
    modulus: u32,
    initial: usize,
    labels: Vec<String>,
    outputs: Vec<MultValue>,
    trans: Vec<usize>,
}

impl Dfao {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn state_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn output(&self, state: usize) -> MultValue {
        self.outputs[state]
    }

    pub fn transition(&self, state: usize, digit: u64) -> usize {
        self.trans[state * self.base as usize + digit as usize]
    }

    /// Run on the base-`base` digits of `n`, least significant first. Zero
    /// consumes no digits and lands on the initial state.
    pub fn run(&self, n: &BigUint) -> MultValue {
        let base = BigUint::from(self.base);
        let mut state = self.initial;
        let mut rest = n.clone();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&base);
            let digit = u64::try_from(&r).expect("remainder below a u64 base");
            state = self.transition(state, digit);
            rest = q;
        }
        self.outputs[state]
    }

    /// Deterministic DOT rendering: one node per state labeled with its
    /// name and output, one edge per digit.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfao {\n  rankdir=LR;\n");
        for s in 0..self.state_count() {
            let shape = if s == self.initial { "doublecircle" } else { "circle" };
            out.push_str(&format!(
                "  s{s} [label=\"{} / {}\" shape={shape}];\n",
                self.labels[s],
                self.outputs[s].display(self.modulus)
            ));
        }
        for s in 0..self.state_count() {
            for d in 0..self.base {
                out.push_str(&format!("  s{s} -> s{} [label=\"{d}\"];\n", self.transition(s, d)));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum StateKey {
    /// Valuation already decided; output fixed at accumulated exponent `i`.
    Const(u32),
    /// `i` exponent steps taken, carry `j` still to be resolved: reading the
    /// rest of the input `n'`, the output exponent is `i + v_p(j + q*n')`.
    Track(u32, u64),
}

/// Build the DFAO computing `a^{v_p(q*n + b)}` over exponents mod `m`, with
/// `a` a unit and `p` prime not dividing `q`. The state set is the constants
/// `a^i` plus carry states `(i, j)`; `j` starts at `b` and contracts below
/// `q` after the transient, so the automaton has about `order(a) * (q +
/// log_p b)` states.
pub fn build_dfao_vp(p: u64, q: u64, b: u64, a: MultValue, m: u32) -> Result<Dfao> {
    if m == 0 {
        return Err(Error::InvalidSpec("group order must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if q == 0 {
        return Err(Error::InvalidInput("step q must be positive".into()));
    }
    if q % p == 0 {
        return Err(Error::InvalidInput(format!(
            "p = {p} divides q = {q}; the valuation of q*n + b would not be digit-driven"
        )));
    }
    let MultValue::Unit(e) = a else {
        return Err(Error::InvalidInput(
            "the automaton family needs a unit value; zero does not exponentiate".into(),
        ));
    };
    let e = e % m;
    let order = MultValue::Unit(e).order(m).expect("a unit has an order");

    let mut ids: std::collections::HashMap<StateKey, usize> = std::collections::HashMap::new();
    let mut keys: Vec<StateKey> = Vec::new();
    let mut trans: Vec<usize> = Vec::new();

    let initial_key = StateKey::Track(0, b);
    ids.insert(initial_key, 0);
    keys.push(initial_key);

    let mut next = 0usize;
    while next < keys.len() {
        let key = keys[next];
        for digit in 0..p {
            let child = match key {
                StateKey::Const(i) => StateKey::Const(i),
                StateKey::Track(i, j) => {
                    let c = q
                        .checked_mul(digit)
                        .and_then(|x| x.checked_add(j))
                        .ok_or_else(|| Error::Overflow("carry exceeds u64".into()))?;
                    if c % p == 0 {
                        StateKey::Track((i + 1) % order, c / p)
                    } else {
                        StateKey::Const(i)
                    }
                }
            };
            let id = *ids.entry(child).or_insert_with(|| {
                keys.push(child);
                keys.len() - 1
            });
            trans.push(id);
        }
        next += 1;
        if keys.len().saturating_mul(p as usize) > MAX_TRANSITION_CELLS {
            return Err(Error::ResourceLimit {
                requested: keys.len() * p as usize,
                cap: MAX_TRANSITION_CELLS,
            });
        }
    }

    let mut labels = Vec::with_capacity(keys.len());
    let mut outputs = Vec::with_capacity(keys.len());
    for key in &keys {
        match *key {
            StateKey::Const(i) => {
                labels.push(format!("c{i}"));
                outputs.push(MultValue::Unit(((e as u64 * i as u64) % m as u64) as u32));
            }
            StateKey::Track(i, j) => {
                labels.push(format!("t{i}_{j}"));
                if j == 0 {
                    // only all-zero input stays here, i.e. the padded point
                    outputs.push(MultValue::one());
                } else {
                    let mut v = 0u64;
                    let mut rest = j;
                    while rest % p == 0 {
                        rest /= p;
                        v += 1;
                    }
                    let exponent = (i as u64 + v) % order as u64;
                    outputs.push(MultValue::Unit(((e as u64 * exponent) % m as u64) as u32));
                }
            }
        }
    }

    Ok(Dfao { base: p, modulus: m, initial: 0, labels, outputs, trans })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;
    use crate::multcore::SequenceSpec;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn reproduces_parity_of_dyadic_valuation() {
        let dfao = build_dfao_vp(2, 1, 0, MultValue::Unit(1), 2).unwrap();
        assert_eq!(dfao.state_count(), 4);
        assert_eq!(dfao.run(&BigUint::zero()), MultValue::one());
        assert_eq!(dfao.run(&big(8)), MultValue::Unit(1));
        assert_eq!(dfao.run(&big(12)), MultValue::Unit(0));

        let spec = SequenceSpec::from_parts(2, BTreeMap::from([(2, 1)]), vec![]).unwrap();
        for n in 0u64..4096 {
            assert_eq!(dfao.run(&big(n)), spec.eval_padded(&big(n)), "n = {n}");
        }
    }

    #[test]
    fn agrees_with_direct_evaluation_across_the_family() {
        let cases = [(2u64, 1u64, 0u64, 1u32, 2u32), (3, 2, 1, 1, 2), (2, 3, 10, 1, 4), (5, 4, 7, 2, 6)];
        let mut rng = StdRng::seed_from_u64(0x0ddc0ffee);
        for (p, q, b, e, m) in cases {
            let dfao = build_dfao_vp(p, q, b, MultValue::Unit(e), m).unwrap();
            let spec = SequenceSpec::from_parts(m, BTreeMap::from([(p, e)]), vec![])
                .unwrap()
                .ap_subsequence(q, b)
                .unwrap_or_else(|_| panic!("q={q} b={b}"));
            for n in 0u64..2000 {
                let n = big(n);
                assert_eq!(dfao.run(&n), spec.eval_padded(&n), "p={p} q={q} b={b} n={n}");
            }
            for _ in 0..100 {
                let n = BigUint::from_bytes_le(&(0..12).map(|_| rng.gen()).collect::<Vec<u8>>());
                assert_eq!(dfao.run(&n), spec.eval_padded(&n), "p={p} q={q} b={b} n={n}");
            }
        }
    }

    #[test]
    fn trivial_unit_collapses_to_all_ones() {
        let dfao = build_dfao_vp(3, 1, 0, MultValue::Unit(0), 2).unwrap();
        for n in 0u64..200 {
            assert_eq!(dfao.run(&big(n)), MultValue::one());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_dfao_vp(4, 1, 0, MultValue::Unit(1), 2).is_err());
        assert!(build_dfao_vp(2, 6, 1, MultValue::Unit(1), 2).is_err());
        assert!(build_dfao_vp(2, 0, 1, MultValue::Unit(1), 2).is_err());
        assert!(build_dfao_vp(2, 1, 0, MultValue::Zero, 2).is_err());
        assert!(build_dfao_vp(2, 1, 0, MultValue::Unit(1), 0).is_err());
    }

    #[test]
    fn dot_lists_every_state_and_digit_edge() {
        let dfao = build_dfao_vp(3, 2, 1, MultValue::Unit(1), 2).unwrap();
        let dot = dfao.to_dot();
        let nodes = dot.lines().filter(|l| l.contains("label=") && !l.contains("->")).count();
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        assert_eq!(nodes, dfao.state_count());
        assert_eq!(edges, dfao.state_count() * 3);
        // emitting twice gives identical text
        assert_eq!(dot, dfao.to_dot());
    }
}
