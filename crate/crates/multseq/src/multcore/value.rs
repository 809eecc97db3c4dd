use std::fmt;

/// A single term of a sequence: zero, or a root of unity exp(2*pi*i*e/m)
/// stored as the exponent `e`.
///
/// The group order `m` is not carried by the value; it lives on the
/// surrounding [`PrimeAssignment`](super::PrimeAssignment), and operations
/// that need it take it as a parameter. Exponents are kept reduced modulo
/// `m` by every constructor and operation in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultValue {
    Zero,
    Unit(u32),
}

impl MultValue {
    /// Unit value with the exponent reduced modulo `modulus`.
    pub fn unit(exponent: u32, modulus: u32) -> MultValue {
        debug_assert!(modulus >= 1);
        MultValue::Unit(exponent % modulus)
    }

    /// The multiplicative identity.
    pub fn one() -> MultValue {
        MultValue::Unit(0)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, MultValue::Zero)
    }

    pub fn is_one(self) -> bool {
        matches!(self, MultValue::Unit(0))
    }

    pub fn unit_exponent(self) -> Option<u32> {
        match self {
            MultValue::Unit(e) => Some(e),
            MultValue::Zero => None,
        }
    }

    /// Group multiplication; zero absorbs.
    pub fn mul(self, other: MultValue, modulus: u32) -> MultValue {
        match (self, other) {
            (MultValue::Zero, _) | (_, MultValue::Zero) => MultValue::Zero,
            (MultValue::Unit(a), MultValue::Unit(b)) => {
                MultValue::Unit(((a as u64 + b as u64) % modulus as u64) as u32)
            }
        }
    }

    /// `d`-th power for d >= 1. Zero stays zero; unit exponents multiply.
    pub fn pow(self, d: u64, modulus: u32) -> MultValue {
        debug_assert!(d >= 1);
        match self {
            MultValue::Zero => MultValue::Zero,
            MultValue::Unit(e) => {
                MultValue::Unit(((e as u128 * (d % modulus as u64) as u128) % modulus as u128) as u32)
            }
        }
    }

    /// Multiplicative order inside the cyclic group of the given modulus.
    /// `None` for zero.
    pub fn order(self, modulus: u32) -> Option<u32> {
        self.unit_exponent()
            .map(|e| modulus / super::primes::gcd_u32(e, modulus))
    }

    /// Human-readable rendering. The group order decides how familiar the
    /// notation can be: orders 1, 2, 4 print as 1, -1, i, -i; otherwise a
    /// generator `w` of the order-`modulus` group is used.
    pub fn display(self, modulus: u32) -> String {
        match self {
            MultValue::Zero => "0".to_string(),
            MultValue::Unit(0) => "1".to_string(),
            MultValue::Unit(e) => match (modulus, e) {
                (2, 1) => "-1".to_string(),
                (4, 1) => "i".to_string(),
                (4, 2) => "-1".to_string(),
                (4, 3) => "-i".to_string(),
                (_, e) => format!("w^{e}"),
            },
        }
    }
}

impl fmt::Display for MultValue {
    /// Modulus-free rendering used in fingerprints: `0`, `1`, or `u{e}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultValue::Zero => write!(f, "0"),
            MultValue::Unit(0) => write!(f, "1"),
            MultValue::Unit(e) => write!(f, "u{e}"),
        }
    }
}
