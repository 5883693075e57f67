//! Binary n-tuples with mod-2 algebra.
//!
//! A [`BitString`] packs up to 64 bits into one word. Position 0 is the
//! leftmost character of the textual form and the most significant bit of
//! [`BitString::index`], so `(110)` has index 6.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance::MAX_BITS;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    // field order matters for the derived Ord: equal lengths compare by
    // index, which is lexicographic on the textual form
    len: usize,
    word: u64,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_BITS, "bit string longer than {MAX_BITS}");
        BitString { len, word: 0 }
    }

    pub fn ones(len: usize) -> Self {
        assert!(len <= MAX_BITS, "bit string longer than {MAX_BITS}");
        BitString { len, word: mask(len) }
    }

    /// Builds the string whose basis-state index is `index`.
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        if len > MAX_BITS {
            return Err(Error::InvalidInput(format!("bit string longer than {MAX_BITS}")));
        }
        if index & !mask(len) != 0 {
            return Err(Error::InvalidInput(format!("index {index} does not fit in {len} bits")));
        }
        Ok(BitString { len, word: index })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut s = BitString::zeros(bits.len().min(MAX_BITS));
        if bits.len() > MAX_BITS {
            return Err(Error::InvalidInput(format!("bit string longer than {MAX_BITS}")));
        }
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => s.set(i, true),
                _ => return Err(Error::InvalidInput(format!("bit value {b} at position {i}"))),
            }
        }
        Ok(s)
    }

    /// String of length `len` with ones exactly at `positions`.
    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut s = BitString::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(Error::InvalidInput(format!("position {p} out of range for length {len}")));
            }
            s.set(p, true);
        }
        Ok(s)
    }

    /// Every string of length `len`, in ascending index order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < MAX_BITS, "cannot enumerate 2^{len} strings");
        (0..1u64 << len).map(move |word| BitString { len, word })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    pub fn index(&self) -> u64 {
        self.word
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "position {pos} out of range for length {}", self.len);
        self.word >> (self.len - 1 - pos) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "position {pos} out of range for length {}", self.len);
        let bit = 1u64 << (self.len - 1 - pos);
        if value {
            self.word |= bit;
        } else {
            self.word &= !bit;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i) as u8)
    }

    fn same_len(&self, other: &BitString) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        Ok(())
    }

    /// Elementwise XOR.
    pub fn add_mod2(&self, other: &BitString) -> Result<BitString> {
        self.same_len(other)?;
        Ok(BitString { len: self.len, word: self.word ^ other.word })
    }

    /// Scalar product mod 2.
    pub fn dot_mod2(&self, other: &BitString) -> Result<u8> {
        self.same_len(other)?;
        Ok(((self.word & other.word).count_ones() & 1) as u8)
    }

    pub fn weight(&self) -> usize {
        self.word.count_ones() as usize
    }

    /// 0-based positions of the ones, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Size of `supp(self) ∪ supp(other)`.
    pub fn union_weight(&self, other: &BitString) -> Result<usize> {
        self.same_len(other)?;
        Ok((self.word | other.word).count_ones() as usize)
    }

    /// True when every one of `self` is also set in `other`.
    pub fn is_within(&self, other: &BitString) -> Result<bool> {
        self.same_len(other)?;
        Ok(self.word & !other.word == 0)
    }

    /// Reads the bits at `positions` into a new string of length `positions.len()`.
    pub fn restrict(&self, positions: &[usize]) -> BitString {
        let mut out = BitString::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            out.set(j, self.get(p));
        }
        out
    }
}

fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for b in self.bits() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Accepts `(0110)` and, for convenience on the command line, `0110`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match (s.strip_prefix('('), s.strip_suffix(')')) {
            (Some(_), Some(_)) => &s[1..s.len() - 1],
            (None, None) => s,
            _ => return Err(Error::Parse(format!("unbalanced parentheses in {s:?}"))),
        };
        let bits = inner
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BitString::from_bits(&bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
