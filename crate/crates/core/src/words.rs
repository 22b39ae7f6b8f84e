//! Binary words with both an F2 view (bits) and a ±1 view (signs).
//!
//! Bit `0` corresponds to sign `+1` and bit `1` to sign `-1`, so the F2 sum of
//! two words is the elementwise product of their sign views.

use std::fmt;

use crate::error::{invalid, Result};
use crate::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    bits: Vec<u8>,
}

impl BinaryWord {
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![1; len] }
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return invalid(format!("bit value {b} is not 0 or 1"));
        }
        Ok(Self { bits })
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let bits = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                other => invalid(format!("sign value {other} is not ±1")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }

    pub fn from_bools(bools: impl IntoIterator<Item = bool>) -> Self {
        Self {
            bits: bools.into_iter().map(u8::from).collect(),
        }
    }

    /// Word of length `len` whose bit `i` is bit `i` of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        debug_assert!(len <= 64);
        Self {
            bits: (0..len).map(|i| ((mask >> i) & 1) as u8).collect(),
        }
    }

    pub fn to_mask(&self) -> Result<u64> {
        if self.bits.len() > 64 {
            return invalid(format!("word of length {} does not fit a u64 mask", self.len()));
        }
        Ok(self
            .bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| m | (u64::from(b) << i)))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn sign(&self, i: usize) -> i8 {
        1 - 2 * self.bits[i] as i8
    }

    pub fn signs(&self) -> Vec<i8> {
        self.bits.iter().map(|&b| 1 - 2 * b as i8).collect()
    }

    /// Number of `1` bits (equivalently, `-1` signs).
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// The complement `z̄`, i.e. the sign negation `-z`.
    pub fn negated(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| b ^ 1).collect(),
        }
    }

    /// F2 sum, i.e. elementwise product of the sign views.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return invalid(format!("length mismatch {} vs {}", self.len(), other.len()));
        }
        Ok(Self {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    /// `+`/`-` rendering of the sign view.
    pub fn to_sign_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 0 { '+' } else { '-' }).collect()
    }

    pub fn parse_sign_string(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(0),
                '-' => Ok(1),
                other => invalid(format!("unexpected character {other:?} in sign string")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
    }

    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => invalid(format!("unexpected character {other:?} in bit string")),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({})", self.to_bit_string())
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// Absolute mean of the ±1 entries.
pub fn bias(w: &BinaryWord) -> Result<Rational> {
    if w.is_empty() {
        return invalid("bias of an empty word");
    }
    let n = w.len() as i64;
    let ones = w.weight() as i64;
    Ok(Rational::new((n - 2 * ones).abs(), n))
}

/// Relative Hamming distance.
pub fn distance(u: &BinaryWord, v: &BinaryWord) -> Result<Rational> {
    if u.len() != v.len() {
        return invalid(format!("length mismatch {} vs {}", u.len(), v.len()));
    }
    if u.is_empty() {
        return invalid("distance between empty words");
    }
    let diff = u.bits.iter().zip(&v.bits).filter(|(a, b)| a != b).count();
    Ok(Rational::new(diff as i64, u.len() as i64))
}

/// Signed correlation `E_i u_i v_i` in the ±1 view.
pub fn correlation(u: &BinaryWord, v: &BinaryWord) -> Result<Rational> {
    let d = distance(u, v)?;
    Ok(Rational::from_integer(1) - d * 2)
}
