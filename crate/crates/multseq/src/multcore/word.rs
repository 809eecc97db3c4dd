use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::value::MultValue;
use crate::{Error, Result};

/// A materialized stretch of a sequence, stored as small symbol ids over a
/// per-word alphabet.
///
/// The alphabet lists the distinct values in order of first occurrence, so a
/// word built twice from the same data is bit-identical. `origin` records the
/// index (in the owning spec's domain) of the first symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolWord {
    alphabet: Vec<MultValue>,
    data: Vec<u8>,
    origin: BigUint,
}

impl SymbolWord {
    /// Build a word from explicit values. Fails if more than 256 distinct
    /// values occur (symbol ids are one byte).
    pub fn from_values(
        origin: BigUint,
        values: impl IntoIterator<Item = MultValue>,
    ) -> Result<SymbolWord> {
        let mut alphabet: Vec<MultValue> = Vec::new();
        let mut data = Vec::new();
        for v in values {
            let id = match alphabet.iter().position(|&a| a == v) {
                Some(i) => i,
                None => {
                    if alphabet.len() == 256 {
                        return Err(Error::InvalidInput(
                            "word alphabet exceeds 256 distinct values".into(),
                        ));
                    }
                    alphabet.push(v);
                    alphabet.len() - 1
                }
            };
            data.push(id as u8);
        }
        Ok(SymbolWord { alphabet, data, origin })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn origin(&self) -> &BigUint {
        &self.origin
    }

    pub fn alphabet(&self) -> &[MultValue] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.data
    }

    pub fn symbol(&self, i: usize) -> u8 {
        self.data[i]
    }

    pub fn value(&self, i: usize) -> MultValue {
        self.alphabet[self.data[i] as usize]
    }

    pub fn values(&self) -> impl Iterator<Item = MultValue> + '_ {
        self.data.iter().map(move |&s| self.alphabet[s as usize])
    }

    /// Symbol index of a value in this word's alphabet, if it occurs at all.
    /// Alphabets are tiny, so a linear scan beats any map.
    pub fn symbol_index(&self, value: MultValue) -> Option<u8> {
        self.alphabet.iter().position(|&v| v == value).map(|i| i as u8)
    }

    /// Apply a letter-to-letter coding. The map must cover every value that
    /// actually occurs in the word.
    pub fn apply_coding(&self, map: &BTreeMap<MultValue, MultValue>) -> Result<SymbolWord> {
        let mut images = Vec::with_capacity(self.alphabet.len());
        for &v in &self.alphabet {
            match map.get(&v) {
                Some(&img) => images.push(img),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "coding map is missing used symbol {v}"
                    )))
                }
            }
        }
        SymbolWord::from_values(
            self.origin.clone(),
            self.data.iter().map(|&s| images[s as usize]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pm(bits: &[i8]) -> Vec<MultValue> {
        bits.iter()
            .map(|&b| if b > 0 { MultValue::Unit(0) } else { MultValue::Unit(1) })
            .collect()
    }

    #[test]
    fn alphabet_tracks_first_occurrence() {
        let w = SymbolWord::from_values(BigUint::zero(), pm(&[1, 1, -1, 1, -1])).unwrap();
        assert_eq!(w.alphabet(), &[MultValue::Unit(0), MultValue::Unit(1)]);
        assert_eq!(w.symbols(), &[0, 0, 1, 0, 1]);
        assert_eq!(w.value(2), MultValue::Unit(1));
    }

    #[test]
    fn coding_total_map_required() {
        let w = SymbolWord::from_values(BigUint::zero(), pm(&[1, -1])).unwrap();
        let mut map = BTreeMap::new();
        map.insert(MultValue::Unit(0), MultValue::Unit(1));
        assert!(matches!(w.apply_coding(&map), Err(Error::InvalidInput(_))));
        map.insert(MultValue::Unit(1), MultValue::Unit(0));
        let swapped = w.apply_coding(&map).unwrap();
        assert_eq!(swapped.values().collect::<Vec<_>>(), pm(&[-1, 1]));
    }

    #[test]
    fn coding_can_collapse() {
        let w = SymbolWord::from_values(BigUint::zero(), pm(&[1, -1, 1])).unwrap();
        let mut map = BTreeMap::new();
        map.insert(MultValue::Unit(0), MultValue::Zero);
        map.insert(MultValue::Unit(1), MultValue::Zero);
        let c = w.apply_coding(&map).unwrap();
        assert_eq!(c.alphabet_size(), 1);
        assert!(c.values().all(|v| v.is_zero()));
    }
}
