use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A packed vector over GF(2).
///
/// Bit `i` is stored at word `i / 64`, position `i % 64`. For integer
/// comparisons index 0 is the most significant bit, so a vector reads like a
/// binary numeral from left to right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits<I>(bits: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<bool>,
    {
        let bits: Vec<bool> = bits.into_iter().map(Into::into).collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` whose integer reading equals `value`.
    pub fn from_u64_msb(value: u64, len: usize) -> Self {
        assert!(len <= 64, "integer form limited to 64 bits");
        let mut v = Self::zeros(len);
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index, i.e. the most significant one.
    pub fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD_BITS + t)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the bitwise AND.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Compares the two vectors as integers with bit 0 most significant.
    pub fn cmp_as_integer(&self, other: &BitVector) -> Ordering {
        assert_eq!(self.len, other.len, "length mismatch in comparison");
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if (a >> first) & 1 == 1 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }

    /// Integer reading with bit 0 most significant.
    pub fn to_u64_msb(&self) -> u64 {
        assert!(self.len <= 64, "integer form limited to 64 bits");
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bit_string())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::parse(1, format!("unexpected character {other:?}"))),
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ordering_is_msb_first() {
        let a: BitVector = "01".parse().unwrap();
        let b: BitVector = "10".parse().unwrap();
        assert_eq!(a.cmp_as_integer(&b), Ordering::Less);
        assert_eq!(a.to_u64_msb(), 1);
        assert_eq!(b.to_u64_msb(), 2);
        assert_eq!(BitVector::from_u64_msb(5, 4).to_bit_string(), "0101");
    }

    #[test]
    fn leading_one_and_ones_across_words() {
        let mut v = BitVector::zeros(130);
        v.set(70, true);
        v.set(129, true);
        assert_eq!(v.leading_one(), Some(70));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![70, 129]);
        assert_eq!(v.weight(), 2);
        let w = BitVector::from_words(130, vec![u64::MAX; 3]);
        assert_eq!(w.weight(), 130);
    }

    #[test]
    fn dot_is_parity() {
        let a: BitVector = "101001".parse().unwrap();
        let x: BitVector = "101000".parse().unwrap();
        assert!(!a.dot(&x));
        let x: BitVector = "100000".parse().unwrap();
        assert!(a.dot(&x));
    }

    #[test]
    fn rejects_bad_characters() {
        assert!("0102".parse::<BitVector>().is_err());
    }
}
