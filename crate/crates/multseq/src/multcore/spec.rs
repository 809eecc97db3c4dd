use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::json;

use super::primes::is_prime;
use super::sieve;
use super::value::MultValue;
use super::word::SymbolWord;
use crate::{Error, Result};

/// Default cap on materialized prefix/window lengths and partial-sum term
/// counts. Callers can widen it explicitly via the `_capped` variants.
pub const DEFAULT_PREFIX_CAP: usize = 1 << 26;

/// Exact p-adic valuation of a positive integer. `p` must be prime and `n`
/// nonzero (the valuation of 0 is not finite).
pub fn valuation(p: u64, n: &BigUint) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if n.is_zero() {
        return Err(Error::OutOfDomain("valuation of 0 is infinite".into()));
    }
    let p_big = BigUint::from(p);
    let mut rest = n.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &p_big);
        if !r.is_zero() {
            return Ok(v);
        }
        rest = q;
        v += 1;
    }
}

/// Values of a completely multiplicative sequence on its finite prime
/// support: each listed prime maps to zero or to a nontrivial root of unity.
/// Primes absent from the support take the value 1.
///
/// Invariants enforced at construction: every key is prime, unit exponents
/// lie in `[1, modulus)` (the unit value 1 is never stored), and no prime is
/// listed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeAssignment {
    modulus: u32,
    support: BTreeMap<u64, MultValue>,
}

impl PrimeAssignment {
    pub fn new(modulus: u32, units: BTreeMap<u64, u32>, zeros: Vec<u64>) -> Result<PrimeAssignment> {
        if modulus == 0 {
            return Err(Error::InvalidSpec("group order must be positive".into()));
        }
        let mut support = BTreeMap::new();
        for (p, e) in units {
            if !is_prime(p) {
                return Err(Error::InvalidSpec(format!("support key {p} is not prime")));
            }
            if e == 0 || e >= modulus {
                return Err(Error::InvalidSpec(format!(
                    "unit exponent {e} for prime {p} must lie in [1, {modulus}); \
                     primes with value 1 are omitted from the support"
                )));
            }
            support.insert(p, MultValue::Unit(e));
        }
        for z in zeros {
            if !is_prime(z) {
                return Err(Error::InvalidSpec(format!("zero entry {z} is not prime")));
            }
            if support.contains_key(&z) {
                return Err(Error::InvalidSpec(format!("prime {z} listed more than once")));
            }
            support.insert(z, MultValue::Zero);
        }
        Ok(PrimeAssignment { modulus, support })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Value at a prime; primes outside the support map to 1.
    pub fn value(&self, p: u64) -> MultValue {
        self.support.get(&p).copied().unwrap_or(MultValue::Unit(0))
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, MultValue)> + '_ {
        self.support.iter().map(|(&p, &v)| (p, v))
    }

    pub fn unit_primes(&self) -> Vec<u64> {
        self.support
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&p, _)| p)
            .collect()
    }

    pub fn zero_primes(&self) -> Vec<u64> {
        self.support
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(&p, _)| p)
            .collect()
    }

    /// Number of support primes carrying a nontrivial unit value.
    pub fn unit_count(&self) -> usize {
        self.support.values().filter(|v| !v.is_zero()).count()
    }

    /// Product of the zero primes (1 if there are none).
    pub fn zero_product(&self) -> Result<u64> {
        let mut acc = 1u64;
        for z in self.zero_primes() {
            acc = acc
                .checked_mul(z)
                .ok_or_else(|| Error::Overflow("product of zero primes exceeds u64".into()))?;
        }
        Ok(acc)
    }
}

/// Index transform `n -> q*n + b` selecting the arithmetic-progression
/// subsequence of an underlying sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApTransform {
    pub q: u64,
    pub b: u64,
}

/// A concrete sequence: a prime assignment plus an optional
/// arithmetic-progression transform and a power.
///
/// Indexing conventions: without a transform the spec denotes `(u(n))` for
/// `n >= 1`; with a transform it denotes `(u(q*n + b))` for `n >= 0`, and
/// `b >= 1` keeps index 0 inside the domain of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    assignment: PrimeAssignment,
    ap: Option<ApTransform>,
    power: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAp {
    q: u64,
    b: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    m: u32,
    #[serde(default)]
    units: BTreeMap<String, u32>,
    #[serde(default)]
    zeros: Vec<u64>,
    #[serde(default)]
    ap: Option<RawAp>,
    #[serde(default)]
    power: Option<u64>,
}

impl SequenceSpec {
    pub fn new(assignment: PrimeAssignment) -> SequenceSpec {
        SequenceSpec { assignment, ap: None, power: 1 }
    }

    /// Convenience constructor from plain parts.
    pub fn from_parts(modulus: u32, units: BTreeMap<u64, u32>, zeros: Vec<u64>) -> Result<SequenceSpec> {
        Ok(SequenceSpec::new(PrimeAssignment::new(
            modulus,
            units.into_iter().collect(),
            zeros,
        )?))
    }

    /// Parse the JSON description, e.g.
    /// `{"m": 2, "units": {"2": 1, "3": 1}, "zeros": [5], "ap": {"q": 3, "b": 1}, "power": 1}`.
    /// Prime keys are decimal strings; unknown keys are rejected.
    pub fn from_json_str(text: &str) -> Result<SequenceSpec> {
        let raw: RawSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("malformed spec JSON: {e}")))?;
        let mut units = BTreeMap::new();
        for (key, e) in raw.units {
            let p: u64 = key
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("unit key {key:?} is not a decimal integer")))?;
            if units.insert(p, e).is_some() {
                return Err(Error::InvalidSpec(format!("prime {p} listed more than once")));
            }
        }
        let assignment = PrimeAssignment::new(raw.m, units, raw.zeros)?;
        let mut spec = SequenceSpec::new(assignment);
        if let Some(RawAp { q, b }) = raw.ap {
            if q == 0 {
                return Err(Error::InvalidSpec("ap step q must be positive".into()));
            }
            if b == 0 {
                return Err(Error::InvalidSpec(
                    "ap offset b must be >= 1 so that index 0 maps to a positive integer".into(),
                ));
            }
            spec.ap = Some(ApTransform { q, b });
        }
        match raw.power {
            None => {}
            Some(0) => return Err(Error::InvalidSpec("power must be >= 1".into())),
            Some(d) => spec.power = d,
        }
        Ok(spec)
    }

    /// Canonical JSON rendering; equal specs produce identical text.
    pub fn to_json(&self) -> String {
        let units: BTreeMap<String, u32> = self
            .assignment
            .support()
            .filter_map(|(p, v)| v.unit_exponent().map(|e| (p.to_string(), e)))
            .collect();
        let ap = match self.ap {
            Some(ApTransform { q, b }) => json!({ "q": q, "b": b }),
            None => serde_json::Value::Null,
        };
        json!({
            "m": self.assignment.modulus(),
            "units": units,
            "zeros": self.assignment.zero_primes(),
            "ap": ap,
            "power": self.power,
        })
        .to_string()
    }

    /// Canonical identity string used to tag derived artifacts.
    pub fn fingerprint(&self) -> String {
        self.to_json()
    }

    pub fn assignment(&self) -> &PrimeAssignment {
        &self.assignment
    }

    pub fn modulus(&self) -> u32 {
        self.assignment.modulus
    }

    pub fn ap(&self) -> Option<ApTransform> {
        self.ap
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    /// First index of the sequence's domain: 1 plain, 0 with a transform.
    pub fn origin(&self) -> u64 {
        if self.ap.is_some() {
            0
        } else {
            1
        }
    }

    /// The integer actually evaluated at index `n`.
    pub fn underlying_index(&self, n: &BigUint) -> BigUint {
        match self.ap {
            None => n.clone(),
            Some(ApTransform { q, b }) => n * q + b,
        }
    }

    /// Restrict to the subsequence `n -> q*n + b` of this spec's own index
    /// domain. Transforms compose; `(1, 0)` is the identity.
    pub fn ap_subsequence(&self, q: u64, b: u64) -> Result<SequenceSpec> {
        if q == 0 {
            return Err(Error::InvalidInput("subsequence step q must be positive".into()));
        }
        if q == 1 && b == 0 {
            return Ok(self.clone());
        }
        let ap = match self.ap {
            None => {
                if b == 0 {
                    return Err(Error::InvalidInput(
                        "subsequence of a plain spec needs offset b >= 1 (index 0 would hit u(0))"
                            .into(),
                    ));
                }
                ApTransform { q, b }
            }
            Some(ApTransform { q: q0, b: b0 }) => {
                let q_new = q0
                    .checked_mul(q)
                    .ok_or_else(|| Error::Overflow("composed ap step exceeds u64".into()))?;
                let b_new = q0
                    .checked_mul(b)
                    .and_then(|x| x.checked_add(b0))
                    .ok_or_else(|| Error::Overflow("composed ap offset exceeds u64".into()))?;
                ApTransform { q: q_new, b: b_new }
            }
        };
        Ok(SequenceSpec { assignment: self.assignment.clone(), ap: Some(ap), power: self.power })
    }

    /// Raise every term to the `d`-th power (d >= 1). The group order is
    /// kept; exponents multiply with no attempt to shrink the group.
    pub fn power_sequence(&self, d: u64) -> Result<SequenceSpec> {
        if d == 0 {
            return Err(Error::InvalidInput("power must be >= 1".into()));
        }
        let power = self
            .power
            .checked_mul(d)
            .ok_or_else(|| Error::Overflow("accumulated power exceeds u64".into()))?;
        Ok(SequenceSpec { assignment: self.assignment.clone(), ap: self.ap, power })
    }

    /// Value at a prime after applying the stored power.
    pub fn effective_value(&self, p: u64) -> MultValue {
        self.assignment.value(p).pow(self.power, self.assignment.modulus)
    }

    /// Support primes whose effective value is neither 0 nor 1. Their count
    /// drives the polynomial degree of the factor-complexity growth.
    pub fn nontrivial_unit_primes(&self) -> Vec<u64> {
        self.assignment
            .support()
            .filter(|&(p, v)| !v.is_zero() && !self.effective_value(p).is_one())
            .map(|(p, _)| p)
            .collect()
    }

    /// Evaluate at index `n` of this spec's domain. Trial division touches
    /// only the support primes; no other factoring happens.
    pub fn eval_at(&self, n: &BigUint) -> Result<MultValue> {
        let arg = self.underlying_index(n);
        if arg.is_zero() {
            return Err(Error::OutOfDomain(
                "index evaluates the sequence at 0; the domain starts at 1".into(),
            ));
        }
        let m = self.assignment.modulus as u64;
        let mut rest = arg;
        let mut exp_sum = 0u64;
        for (p, v) in self.assignment.support() {
            let p_big = BigUint::from(p);
            match v {
                MultValue::Zero => {
                    if (&rest % &p_big).is_zero() {
                        return Ok(MultValue::Zero);
                    }
                }
                MultValue::Unit(e) => {
                    let mut count = 0u64;
                    loop {
                        let (q, r) = num_integer::Integer::div_rem(&rest, &p_big);
                        if !r.is_zero() {
                            break;
                        }
                        rest = q;
                        count += 1;
                    }
                    exp_sum = (exp_sum + e as u64 * (count % m)) % m;
                }
            }
        }
        Ok(MultValue::Unit(((exp_sum * (self.power % m)) % m) as u32))
    }

    /// Evaluate with the index-0 convention: the single undefined point
    /// (underlying integer 0) is padded with the value 1 so that words can
    /// start at index 0 for kernel and automaton analyses.
    pub fn eval_padded(&self, n: &BigUint) -> MultValue {
        if self.underlying_index(n).is_zero() {
            return MultValue::one();
        }
        self.eval_at(n).expect("nonzero underlying index evaluates")
    }

    /// Materialize `len` consecutive terms starting at the domain origin.
    pub fn prefix(&self, len: usize) -> Result<SymbolWord> {
        self.prefix_capped(len, DEFAULT_PREFIX_CAP)
    }

    pub fn prefix_capped(&self, len: usize, cap: usize) -> Result<SymbolWord> {
        self.window_capped(&BigUint::from(self.origin()), len, cap)
    }

    /// Prefix re-indexed to start at 0, padding with the value 1 when the
    /// domain itself starts at 1.
    pub fn prefix_from_zero(&self, len: usize) -> Result<SymbolWord> {
        if self.origin() == 0 {
            return self.prefix(len);
        }
        if len == 0 {
            return Err(Error::InvalidInput("window length must be positive".into()));
        }
        let tail = self.prefix(len - 1)?;
        let values = std::iter::once(MultValue::one()).chain(tail.values());
        SymbolWord::from_values(BigUint::zero(), values)
    }

    /// Materialize `len` consecutive terms starting at index `start` of this
    /// spec's domain, by valuation sieving over the support primes.
    pub fn window(&self, start: &BigUint, len: usize) -> Result<SymbolWord> {
        self.window_capped(start, len, DEFAULT_PREFIX_CAP)
    }

    pub fn window_capped(&self, start: &BigUint, len: usize, cap: usize) -> Result<SymbolWord> {
        if len == 0 {
            return Err(Error::InvalidInput("window length must be positive".into()));
        }
        if len > cap {
            return Err(Error::ResourceLimit { requested: len, cap });
        }
        if start < &BigUint::from(self.origin()) {
            return Err(Error::OutOfDomain(format!(
                "window starts at {start}, before the domain origin {}",
                self.origin()
            )));
        }
        let values = sieve::window_values(self, start, len)?;
        SymbolWord::from_values(start.clone(), values)
    }
}
