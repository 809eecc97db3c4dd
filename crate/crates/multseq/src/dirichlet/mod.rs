//! Series-side validation: the generating Dirichlet series of a completely
//! multiplicative spec factors as zeta(s) times one rational correction per
//! supported prime. This module evaluates partial sums against that closed
//! form inside the convergence half-plane and lists the poles the rational
//! factors predict on the imaginary axis.

mod zeta;

pub use zeta::zeta;

use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::One;
use serde_json::json;

use crate::multcore::{is_prime, MultValue, SequenceSpec, DEFAULT_PREFIX_CAP};
use crate::{Error, Result};

/// The complex number a value stands for: zero, or the unit exp(2*pi*i*e/m).
pub fn embed(value: MultValue, modulus: u32) -> Complex<f64> {
    match value {
        MultValue::Zero => Complex::new(0.0, 0.0),
        MultValue::Unit(e) => {
            let m = modulus.max(1);
            Complex::from_polar(1.0, TAU * f64::from(e % m) / f64::from(m))
        }
    }
}

/// The finite product over supported primes of (1 - p^-s)/(1 - u(p) p^-s).
/// Multiplied by zeta(s) it gives the value of the full series; a zero value
/// contributes the bare factor (1 - p^-s).
pub fn euler_factor(spec: &SequenceSpec, s: Complex<f64>) -> Result<Complex<f64>> {
    if spec.ap().is_some() || spec.power() != 1 {
        return Err(Error::InvalidInput(
            "the Euler product describes the base sequence; drop ap/power transforms".into(),
        ));
    }
    if !(s.re > 1.0) {
        return Err(Error::OutOfDomain(format!(
            "Euler factor at Re(s) = {}; the product converges only for Re(s) > 1",
            s.re
        )));
    }
    let mut product = Complex::new(1.0, 0.0);
    for (p, value) in spec.assignment().support() {
        let p_inv = (-s * (p as f64).ln()).exp();
        product *= (1.0 - p_inv) / (1.0 - embed(value, spec.modulus()) * p_inv);
    }
    Ok(product)
}

/// Neumaier-compensated accumulator, so millions of terms do not smear the
/// tolerances the checks are pinned to.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Partial sum of the spec's Dirichlet series: terms value(n)/n^s over the
/// spec's own indices n = 1..=terms, values taken from a sieved window.
pub fn partial_sum(spec: &SequenceSpec, s: Complex<f64>, terms: usize) -> Result<Complex<f64>> {
    if !(s.re > 1.0) {
        return Err(Error::OutOfDomain(format!(
            "partial sums are checked in the half-plane Re(s) > 1, got Re(s) = {}",
            s.re
        )));
    }
    let word = spec.window_capped(&BigUint::one(), terms, DEFAULT_PREFIX_CAP)?;
    let alphabet: Vec<Complex<f64>> =
        word.alphabet().iter().map(|&v| embed(v, spec.modulus())).collect();
    let zero = word.symbol_index(MultValue::Zero);
    let (mut re, mut im) = (Compensated::default(), Compensated::default());
    for (i, &sym) in word.symbols().iter().enumerate() {
        if zero == Some(sym) {
            continue;
        }
        let n = (i + 1) as f64;
        let term = alphabet[sym as usize] * (-s * n.ln()).exp();
        re.add(term.re);
        im.add(term.im);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// One identity check: partial sum on one side, zeta(s) times the Euler
/// factor on the other, with the discrepancy recorded rather than judged.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerCheck {
    pub s: Complex<f64>,
    pub terms: usize,
    pub partial: Complex<f64>,
    pub closed_form: Complex<f64>,
    pub abs_error: f64,
}

impl EulerCheck {
    pub fn to_json(&self) -> String {
        json!({
            "s": { "re": self.s.re, "im": self.s.im },
            "terms": self.terms,
            "partial": { "re": self.partial.re, "im": self.partial.im },
            "closed_form": { "re": self.closed_form.re, "im": self.closed_form.im },
            "abs_error": self.abs_error,
        })
        .to_string()
    }
}

/// Compare the truncated series against zeta(s) times the Euler factor for
/// real s > 1. The error is reported; how small is small enough stays with
/// the caller.
pub fn euler_check(spec: &SequenceSpec, s: f64, terms: usize) -> Result<EulerCheck> {
    let s_complex = Complex::new(s, 0.0);
    let factor = euler_factor(spec, s_complex)?;
    let closed_form = zeta(s)? * factor;
    let partial = partial_sum(spec, s_complex, terms)?;
    Ok(EulerCheck {
        s: s_complex,
        terms,
        partial,
        closed_form,
        abs_error: (partial - closed_form).norm(),
    })
}

/// The imaginary-axis pole lattice contributed by one prime: ordinates
/// (arg(a) + 2n*pi)/log p. For a = 1 the rational factor collapses to the
/// constant 1 and predicts nothing; such lattices carry the degenerate flag.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleLattice {
    pub prime: u64,
    pub value: MultValue,
    pub modulus: u32,
    /// Principal argument of the embedded unit, in [0, 2*pi).
    pub argument: f64,
    pub degenerate: bool,
    pub ordinates: Vec<(i64, f64)>,
}

impl PoleLattice {
    /// CSV table "n,ordinate", one row per lattice point.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# p={} value={} argument={}\nn,ordinate\n",
            self.prime,
            self.value.display(self.modulus),
            self.argument
        );
        for (n, ordinate) in &self.ordinates {
            out.push_str(&format!("{n},{ordinate}\n"));
        }
        out
    }
}

/// Predicted poles of the factor (p^s - 1)/(p^s - a) for a unit value a,
/// listed for lattice indices n_lo..=n_hi.
pub fn predicted_poles(
    p: u64,
    value: MultValue,
    modulus: u32,
    n_lo: i64,
    n_hi: i64,
) -> Result<PoleLattice> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let MultValue::Unit(e) = value else {
        return Err(Error::InvalidInput(
            "a zero value contributes no rational factor, hence no pole lattice".into(),
        ));
    };
    if modulus == 0 || e >= modulus {
        return Err(Error::InvalidInput(format!(
            "unit exponent {e} does not lie in the order-{modulus} group"
        )));
    }
    if n_lo > n_hi {
        return Err(Error::InvalidInput(format!("empty lattice range {n_lo}..={n_hi}")));
    }
    let argument = TAU * f64::from(e) / f64::from(modulus);
    let log_p = (p as f64).ln();
    let ordinates = (n_lo..=n_hi)
        .map(|n| (n, (argument + TAU * n as f64) / log_p))
        .collect();
    Ok(PoleLattice { prime: p, value, modulus, argument, degenerate: e == 0, ordinates })
}
