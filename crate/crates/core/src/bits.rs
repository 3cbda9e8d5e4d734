use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

/// An ordered, explicitly sized sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: Vec<bool>,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            bits: Vec::with_capacity(cap),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitVec) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Bits `range` as a new vector.
    pub fn slice(&self, range: std::ops::Range<usize>) -> BitVec {
        BitVec::from(self.bits[range].to_vec())
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &BitVec) -> usize {
        assert_eq!(self.len(), other.len(), "hamming on unequal lengths");
        self.iter()
            .zip(other.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Parses one ASCII `0`/`1` per bit. Whitespace (including the trailing
    /// newline) is ignored; anything else is rejected.
    pub fn parse_ascii(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::BitFile(format!(
                        "unexpected character {c:?} at offset {i}"
                    )))
                }
            }
        }
        Ok(Self { bits })
    }

    /// Bit-file encoding: the bits as ASCII digits followed by a newline.
    pub fn to_ascii(&self) -> String {
        let mut s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        s.push('\n');
        s
    }
}

impl From<Vec<bool>> for BitVec {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        assert_eq!(self.len(), rhs.len(), "xor on unequal lengths");
        self.iter().zip(rhs.iter()).map(|(a, b)| a ^ b).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}
