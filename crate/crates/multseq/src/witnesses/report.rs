//! Factor-alignment witnesses: concrete positions far out in the sequence
//! where independently chosen factors of the per-prime subsequences occur
//! side by side, certifying many distinct long factors at once.
//!
//! The builders return every claimed occurrence with its arbitrary-precision
//! start position, and each factor is re-derived letter by letter through
//! `eval_at` before it is reported, so a report is its own proof transcript.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use super::linear::{bezout_solve, crt_align};
use crate::multcore::{max_valuation_in_ap, MultValue, SequenceSpec, SymbolWord};
use crate::{Error, Result};

/// Cap on alignment tuples enumerated while choosing a residue class.
const MAX_TUPLES: u128 = 1 << 22;

/// One certified factor occurrence: `word` read off the sequence starting
/// at index `start` of the reported domain (the word's origin repeats it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFactor {
    pub start: BigUint,
    pub word: SymbolWord,
}

/// Everything needed to audit one lower-bound construction: the parameters
/// chosen along the way, both published bounds, and the distinct factors
/// with their positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// Factor length in each isolating subsequence.
    pub n: usize,
    pub prime_count: usize,
    pub primes: Vec<u64>,
    /// Chosen residue class: one value for the two-prime pipeline, a vector
    /// of `prime_count - 1` values for the general one.
    pub residues: Vec<u64>,
    /// The exponent M making every subsequence `p_i^M`-periodic on the
    /// scanned prefix.
    pub period_exponent: u64,
    pub factor_len: usize,
    /// Prefix length of each subsequence that supplied the factors.
    pub subseq_prefix_len: usize,
    pub bound_nominal: u64,
    pub bound_pigeonhole: u64,
    pub distinct_count: usize,
    /// Fingerprint of the sequence the factor positions index into.
    pub domain: String,
    pub modulus: u32,
    pub factors: Vec<WitnessFactor>,
}

impl WitnessReport {
    /// JSON rendering with all positions as decimal strings; key order is
    /// sorted, so equal reports serialize identically.
    pub fn to_json(&self) -> String {
        let factors: Vec<serde_json::Value> = self
            .factors
            .iter()
            .map(|f| {
                json!({
                    "start": f.start.to_string(),
                    "word": f.word.values().map(|v| v.display(self.modulus)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "prime_count": self.prime_count,
            "primes": self.primes,
            "residues": self.residues,
            "period_exponent": self.period_exponent,
            "factor_len": self.factor_len,
            "subseq_prefix_len": self.subseq_prefix_len,
            "bound_nominal": self.bound_nominal,
            "bound_pigeonhole": self.bound_pigeonhole,
            "distinct_count": self.distinct_count,
            "domain": serde_json::from_str::<serde_json::Value>(&self.domain)
                .unwrap_or(serde_json::Value::String(self.domain.clone())),
            "factors": factors,
        })
        .to_string()
    }
}

fn div_ceil_u128(a: u128, b: u128) -> u128 {
    (a + b - 1) / b
}

/// First occurrences of the first `want` distinct length-`n` factors, in
/// scan order. `None` when the word holds fewer.
fn first_distinct_factors(word: &SymbolWord, n: usize, want: usize) -> Option<Vec<usize>> {
    let symbols = word.symbols();
    if n == 0 || symbols.len() < n {
        return None;
    }
    let mut seen: HashMap<&[u8], usize> = HashMap::new();
    let mut order = Vec::with_capacity(want);
    for offset in 0..=symbols.len() - n {
        let window = &symbols[offset..offset + n];
        if !seen.contains_key(window) {
            seen.insert(window, offset);
            order.push(offset);
            if order.len() == want {
                return Some(order);
            }
        }
    }
    None
}

/// Grow a shared prefix until every subsequence shows `n + 1` distinct
/// length-`n` factors, doubling from a small start up to `budget`.
fn factors_within_budget(
    subseqs: &[SequenceSpec],
    n: usize,
    budget: usize,
) -> Result<(usize, Vec<SymbolWord>, Vec<Vec<usize>>)> {
    let start = (16 * (n + 1)).next_power_of_two();
    let mut prefix_len = start.min(budget);
    loop {
        let mut words = Vec::with_capacity(subseqs.len());
        let mut positions = Vec::with_capacity(subseqs.len());
        let mut complete = true;
        for spec in subseqs {
            let word = spec.window(&BigUint::zero(), prefix_len)?;
            match first_distinct_factors(&word, n, n + 1) {
                Some(p) => positions.push(p),
                None => {
                    complete = false;
                }
            }
            words.push(word);
            if !complete {
                break;
            }
        }
        if complete {
            return Ok((prefix_len, words, positions));
        }
        if prefix_len >= budget {
            return Err(Error::BudgetExhausted { last_tried: prefix_len, budget });
        }
        prefix_len = (prefix_len * 2).min(budget);
    }
}

/// Run `visit` over all `width^t` tuples in odometer order (first index
/// fastest is avoided: index 0 is the outermost digit so tuples ascend
/// lexicographically).
fn for_each_tuple<F: FnMut(&[usize]) -> Result<()>>(
    t: usize,
    width: usize,
    mut visit: F,
) -> Result<()> {
    let mut tuple = vec![0usize; t];
    loop {
        visit(&tuple)?;
        let mut d = t;
        loop {
            if d == 0 {
                return Ok(());
            }
            d -= 1;
            tuple[d] += 1;
            if tuple[d] < width {
                break;
            }
            tuple[d] = 0;
        }
    }
}

/// Lower-bound witness for the two-prime headline sequence, the signs
/// `(-1)^{v_2(n) + v_3(n)}`: at least `ceil((n+1)^2 / 6)` distinct factors
/// of length `max(3n - 2, r + 2n - 1)`, each produced with its position and
/// re-verified letter by letter.
pub fn build_witness_t2(n: usize, prefix_budget: usize) -> Result<WitnessReport> {
    if n == 0 {
        return Err(Error::InvalidInput("factor length n must be positive".into()));
    }
    let u = SequenceSpec::from_parts(2, BTreeMap::from([(2, 1), (3, 1)]), vec![])?;
    // index 3x+1 kills the 3-part, leaving the sign of v_2; 2x+1 conversely
    let a_seq = u.ap_subsequence(3, 1)?;
    let b_seq = u.ap_subsequence(2, 1)?;
    let (prefix_len, words, positions) =
        factors_within_budget(&[a_seq, b_seq], n, prefix_budget)?;
    let (a_word, b_word) = (&words[0], &words[1]);
    let (alphas, betas) = (&positions[0], &positions[1]);

    let m_exp = 1 + max_valuation_in_ap(2, 3, 1, prefix_len as u64)?
        .max(max_valuation_in_ap(3, 2, 1, prefix_len as u64)?);

    // residue class of 2*beta - 3*alpha mod 6 with the most pairs
    let mut class_counts = [0u64; 6];
    for &alpha in alphas {
        for &beta in betas {
            let d = 2 * beta as i128 - 3 * alpha as i128;
            class_counts[d.rem_euclid(6) as usize] += 1;
        }
    }
    let r = (0..6).max_by_key(|&r| (class_counts[r], usize::MAX - r)).expect("six classes");

    let bound = div_ceil_u128((n as u128 + 1).pow(2), 6) as u64;
    let factor_len = (3 * n - 2).max(r + 2 * n - 1);

    let m_exp_u32 = u32::try_from(m_exp).expect("valuations of a short prefix are small");
    let pow2 = BigUint::from(2u32).pow(m_exp_u32);
    let pow3 = BigUint::from(3u32).pow(m_exp_u32);
    let (half2, half3) = (&pow2 / 2u32, &pow3 / 3u32);
    let pow2_int = BigInt::from(pow2.clone());
    let pow3_int = BigInt::from(pow3);

    let mut by_value: BTreeSet<Vec<MultValue>> = BTreeSet::new();
    let mut factors = Vec::new();
    for &alpha in alphas {
        for &beta in betas {
            let d = 2 * beta as i128 - 3 * alpha as i128;
            if d.rem_euclid(6) as usize != r {
                continue;
            }
            // 3k*2^M - 2l*3^M = d - r, i.e. k*2^(M-1) - l*3^(M-1) = (d-r)/6
            let z = BigInt::from((d - r as i128) / 6);
            let pair = bezout_solve(&half2, &half3, &z, &BigInt::zero())?;
            let a_start = BigInt::from(alpha) + &pair.k * &pow2_int;
            let start = (&a_start * 3u32 + 1u32)
                .to_biguint()
                .expect("positive shift of a nonnegative position");
            let b_start = BigInt::from(beta) + &pair.l * &pow3_int;
            debug_assert_eq!(
                BigInt::from(2) * &b_start + 1,
                BigInt::from(start.clone()) + r as i64
            );

            let values = (0..factor_len)
                .map(|o| u.eval_at(&(&start + o)))
                .collect::<Result<Vec<_>>>()?;
            for o in 0..n {
                if values[3 * o] != a_word.value(alpha + o)
                    || values[r + 2 * o] != b_word.value(beta + o)
                {
                    return Err(Error::VerificationFailed(format!(
                        "scattered letters at position {start} disagree with the \
                         subsequence factors (pair alpha={alpha}, beta={beta})"
                    )));
                }
            }
            if by_value.insert(values.clone()) {
                let word = SymbolWord::from_values(start.clone(), values.into_iter())?;
                factors.push(WitnessFactor { start, word });
            }
        }
    }

    if (factors.len() as u64) < bound {
        return Err(Error::VerificationFailed(format!(
            "only {} distinct factors, bound says {bound}",
            factors.len()
        )));
    }
    Ok(WitnessReport {
        n,
        prime_count: 2,
        primes: vec![2, 3],
        residues: vec![r as u64],
        period_exponent: m_exp,
        factor_len,
        subseq_prefix_len: prefix_len,
        bound_nominal: bound,
        bound_pigeonhole: bound,
        distinct_count: factors.len(),
        domain: u.fingerprint(),
        modulus: 2,
        factors,
    })
}

/// Lower-bound witness for any spec with `t >= 2` effectively nontrivial
/// unit primes: distinct factors of the subsequence `w(x) = u(qz*x + 1)`
/// (`qz` the zero-prime product) of length `n*max(q_i) + p_1*...*p_t`.
///
/// Both published counts are recorded: the one stated with denominator
/// `p_1^(t-1) p_2 ... p_t` (primes ascending) and the pigeonhole count
/// `ceil((n+1)^t / (p_1*...*p_t)^(t-1))` this construction actually
/// guarantees. The builder asserts the smaller of the two.
pub fn build_witness_general(
    spec: &SequenceSpec,
    n: usize,
    prefix_budget: usize,
) -> Result<WitnessReport> {
    if n == 0 {
        return Err(Error::InvalidInput("factor length n must be positive".into()));
    }
    if spec.ap().is_some() {
        return Err(Error::InvalidInput(
            "witness construction starts from the base sequence, not a subsequence".into(),
        ));
    }
    let primes = spec.nontrivial_unit_primes();
    let t = primes.len();
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "got {t} effectively nontrivial unit primes; polynomial growth needs at least 2"
        )));
    }
    let tuple_count = (n as u128 + 1).pow(t as u32);
    if tuple_count > MAX_TUPLES {
        return Err(Error::ResourceLimit {
            requested: tuple_count.min(usize::MAX as u128) as usize,
            cap: MAX_TUPLES as usize,
        });
    }

    let qz = spec.assignment().zero_product()?;
    let mut p_prod = 1u64;
    for &p in &primes {
        p_prod = p_prod
            .checked_mul(p)
            .ok_or_else(|| Error::Overflow("prime product exceeds u64".into()))?;
    }
    let cofactors: Vec<u64> = primes.iter().map(|&p| p_prod / p).collect();
    let q_max = p_prod / primes[0];

    let w = spec.ap_subsequence(qz, 1)?;
    let isolated: Vec<SequenceSpec> = cofactors
        .iter()
        .map(|&qi| w.ap_subsequence(qi, 0))
        .collect::<Result<Vec<_>>>()?;
    let (prefix_len, words, positions) = factors_within_budget(&isolated, n, prefix_budget)?;

    let mut m_exp = 0u64;
    for (i, &p) in primes.iter().enumerate() {
        let step = qz
            .checked_mul(cofactors[i])
            .ok_or_else(|| Error::Overflow("subsequence step exceeds u64".into()))?;
        m_exp = m_exp.max(max_valuation_in_ap(p, step, 1, prefix_len as u64)?);
    }
    m_exp += 1;

    // the class of the offset vector (q_1 a_1 - q_i a_i mod P) decides which
    // tuples can be aligned; take the most populated class
    let offset = |i: usize, tuple: &[usize]| -> i128 {
        cofactors[0] as i128 * positions[0][tuple[0]] as i128
            - cofactors[i] as i128 * positions[i][tuple[i]] as i128
    };
    let mut classes: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for_each_tuple(t, n + 1, |tuple| {
        let vector: Vec<u64> = (1..t)
            .map(|i| offset(i, tuple).rem_euclid(p_prod as i128) as u64)
            .collect();
        *classes.entry(vector).or_insert(0) += 1;
        Ok(())
    })?;
    let mut residues: Vec<u64> = Vec::new();
    let mut best = 0u64;
    for (vector, count) in &classes {
        if *count > best {
            best = *count;
            residues = vector.clone();
        }
    }

    let denom_nominal: u128 = primes.iter().skip(1).map(|&p| p as u128).product::<u128>()
        * (primes[0] as u128).pow(t as u32 - 1);
    let bound_nominal = div_ceil_u128((n as u128).pow(t as u32), denom_nominal) as u64;
    let bound_pigeonhole =
        div_ceil_u128(tuple_count, (p_prod as u128).pow(t as u32 - 1)) as u64;
    let factor_len = n * q_max as usize + p_prod as usize;

    let m_exp_u32 = u32::try_from(m_exp).expect("valuations of a short prefix are small");
    let moduli: Vec<BigUint> =
        primes.iter().map(|&p| BigUint::from(p).pow(m_exp_u32 - 1)).collect();
    let pi_pow: Vec<BigInt> =
        primes.iter().map(|&p| BigInt::from(p).pow(m_exp_u32)).collect();
    let r_max = residues.iter().copied().max().unwrap_or(0);

    let mut by_value: BTreeSet<Vec<MultValue>> = BTreeSet::new();
    let mut factors = Vec::new();
    for_each_tuple(t, n + 1, |tuple| {
        for (i, &r_i) in residues.iter().enumerate() {
            if offset(i + 1, tuple).rem_euclid(p_prod as i128) as u64 != r_i {
                return Ok(());
            }
        }
        // align: m_1 q_1 p_1^M - m_i q_i p_i^M = r_i - (q_1 a_1 - q_i a_i);
        // all terms are multiples of P, so divide through before chaining
        let targets: Vec<BigInt> = (1..t)
            .map(|i| {
                let l = BigInt::from(residues[i - 1] as i128 - offset(i, tuple));
                debug_assert!((&l % p_prod).is_zero());
                l / p_prod
            })
            .collect();
        let chain = crt_align(&moduli, &targets)?;

        let subseq_starts: Vec<BigInt> = (0..t)
            .map(|i| {
                (BigInt::from(positions[i][tuple[i]]) + &chain.k[i] * &pi_pow[i])
                    * BigInt::from(cofactors[i])
            })
            .collect();
        let block_start = (&subseq_starts[0] - r_max)
            .to_biguint()
            .expect("the aligned block sits past at least one full period");
        for i in 1..t {
            debug_assert_eq!(
                &subseq_starts[0] - &subseq_starts[i],
                BigInt::from(residues[i - 1])
            );
        }

        let values = (0..factor_len)
            .map(|o| w.eval_at(&(&block_start + o)))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..t {
            let shift = (&subseq_starts[i] - BigInt::from(block_start.clone()))
                .to_usize()
                .expect("offsets inside the block are small");
            for o in 0..n {
                if values[shift + cofactors[i] as usize * o] != words[i].value(positions[i][tuple[i]] + o)
                {
                    return Err(Error::VerificationFailed(format!(
                        "scattered letters at block {block_start} disagree with \
                         subsequence {i} (tuple {tuple:?})"
                    )));
                }
            }
        }
        if by_value.insert(values.clone()) {
            let word = SymbolWord::from_values(block_start.clone(), values.into_iter())?;
            factors.push(WitnessFactor { start: block_start, word });
        }
        Ok(())
    })?;

    let asserted = bound_nominal.min(bound_pigeonhole);
    if (factors.len() as u64) < asserted {
        return Err(Error::VerificationFailed(format!(
            "only {} distinct factors, asserted bound is {asserted}",
            factors.len()
        )));
    }
    Ok(WitnessReport {
        n,
        prime_count: t,
        primes,
        residues,
        period_exponent: m_exp,
        factor_len,
        subseq_prefix_len: prefix_len,
        bound_nominal,
        bound_pigeonhole,
        distinct_count: factors.len(),
        domain: w.fingerprint(),
        modulus: spec.modulus(),
        factors,
    })
}
