//! Polarization paths and synthesized-channel indices.
//!
//! A [`Path`] is a 0/1 string where position 0 is the first polarization
//! transform applied to the raw channel (0 = "up"/minus, 1 = "down"/plus).
//! The empty path denotes the raw channel itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Path {
    bits: Vec<u8>,
}

impl Path {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::PathSyntax {
                pos,
                msg: format!("symbol {} is not binary", bits[pos]),
            });
        }
        Ok(Self { bits })
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { bits: vec![1; n] }
    }

    /// `bit^count` repeated.
    pub fn run(bit: u8, count: usize) -> Self {
        debug_assert!(bit <= 1);
        Self {
            bits: vec![bit; count],
        }
    }

    /// Decodes an integer code where path position 0 is the most significant
    /// of the `n` low bits.
    pub fn from_code(code: u64, n: usize) -> Self {
        debug_assert!(n <= 64);
        let bits = (0..n).map(|j| ((code >> (n - 1 - j)) & 1) as u8).collect();
        Self { bits }
    }

    /// Inverse of [`Path::from_code`].
    pub fn code(&self) -> u64 {
        debug_assert!(self.bits.len() <= 64);
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
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

    pub fn get(&self, i: usize) -> Option<u8> {
        self.bits.get(i).copied()
    }

    pub fn invert(&self) -> Path {
        Path {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }

    pub fn reversed(&self) -> Path {
        Path {
            bits: self.bits.iter().rev().copied().collect(),
        }
    }

    /// `(n0, n1)`: number of zeros and ones.
    pub fn counts(&self) -> (usize, usize) {
        let n1 = self.bits.iter().filter(|&&b| b == 1).count();
        (self.bits.len() - n1, n1)
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Path { bits }
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    /// Path with `bit` prepended.
    pub fn with_prefix(&self, bit: u8) -> Path {
        let mut bits = Vec::with_capacity(self.len() + 1);
        bits.push(bit);
        bits.extend_from_slice(&self.bits);
        Path { bits }
    }

    /// Path with `bit` appended.
    pub fn with_suffix(&self, bit: u8) -> Path {
        let mut p = self.clone();
        p.push(bit);
        p
    }

    pub fn slice(&self, start: usize, end: usize) -> Path {
        Path {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn leading(&self, bit: u8) -> usize {
        self.bits.iter().take_while(|&&b| b == bit).count()
    }

    pub fn trailing(&self, bit: u8) -> usize {
        self.bits.iter().rev().take_while(|&&b| b == bit).count()
    }

    pub fn starts_with(&self, prefix: &[u8]) -> bool {
        self.bits.starts_with(prefix)
    }

    pub fn ends_with(&self, suffix: &[u8]) -> bool {
        self.bits.ends_with(suffix)
    }

    /// All paths of length `n` in code order.
    pub fn all(n: usize) -> impl Iterator<Item = Path> {
        (0..(1u64 << n)).map(move |c| Path::from_code(c, n))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("ε");
        }
        for b in &self.bits {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({self})")
    }
}

impl FromStr for Path {
    type Err = Error;

    /// Accepts plain binary strings and run-length shorthand such as
    /// `0^2 1^1` or `0^{3}1`. Whitespace separates runs. The empty string
    /// (or `ε`) is the empty path.
    fn from_str(text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        if text.trim() == "ε" {
            return Ok(Path::empty());
        }
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b'0' | b'1' => {
                    let bit = c - b'0';
                    i += 1;
                    if i < bytes.len() && bytes[i] == b'^' {
                        i += 1;
                        let braced = i < bytes.len() && bytes[i] == b'{';
                        if braced {
                            i += 1;
                        }
                        let start = i;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                        if start == i {
                            return Err(Error::PathSyntax {
                                pos: i,
                                msg: "expected exponent after '^'".into(),
                            });
                        }
                        let count: usize = text[start..i].parse().map_err(|_| Error::PathSyntax {
                            pos: start,
                            msg: "exponent too large".into(),
                        })?;
                        if braced {
                            if i >= bytes.len() || bytes[i] != b'}' {
                                return Err(Error::PathSyntax {
                                    pos: i,
                                    msg: "unclosed '{'".into(),
                                });
                            }
                            i += 1;
                        }
                        if count > 64 {
                            return Err(Error::PathSyntax {
                                pos: start,
                                msg: format!("run length {count} exceeds 64"),
                            });
                        }
                        bits.extend(std::iter::repeat(bit).take(count));
                    } else {
                        bits.push(bit);
                    }
                }
                b' ' | b'\t' | b'_' => i += 1,
                _ => {
                    return Err(Error::PathSyntax {
                        pos: i,
                        msg: format!("unexpected character {:?}", text[i..].chars().next().unwrap_or('?')),
                    })
                }
            }
        }
        Ok(Path { bits })
    }
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which end of the binary expansion of an index is the first transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BitOrder {
    #[default]
    Msb,
    Lsb,
}

impl FromStr for BitOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "msb" | "msb-first" => Ok(BitOrder::Msb),
            "lsb" | "lsb-first" => Ok(BitOrder::Lsb),
            _ => Err(Error::InvalidParameter(format!("unknown bit order {s:?}"))),
        }
    }
}

/// `W_N^{(i)}` for `0 <= i < 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelIndex {
    n: u32,
    i: u64,
}

impl ChannelIndex {
    pub fn new(n: u32, i: u64) -> Result<Self> {
        if n == 0 || n > 63 || i >= (1u64 << n) {
            return Err(Error::IndexOutOfRange { n, index: i });
        }
        Ok(Self { n, i })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn index(&self) -> u64 {
        self.i
    }
}

pub fn index_to_path(c: ChannelIndex, order: BitOrder) -> Path {
    let p = Path::from_code(c.i, c.n as usize);
    match order {
        BitOrder::Msb => p,
        BitOrder::Lsb => p.reversed(),
    }
}

pub fn path_to_index(p: &Path, order: BitOrder) -> ChannelIndex {
    let code = match order {
        BitOrder::Msb => p.code(),
        BitOrder::Lsb => p.reversed().code(),
    };
    ChannelIndex {
        n: p.len() as u32,
        i: code,
    }
}

/// Mapping between printed channel labels and paths: bit order plus the
/// label of the first channel (0 or 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub order: BitOrder,
    pub base: u8,
}

impl Default for Convention {
    fn default() -> Self {
        Self {
            order: BitOrder::Msb,
            base: 0,
        }
    }
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention { order: BitOrder::Msb, base: 0 },
        Convention { order: BitOrder::Lsb, base: 0 },
        Convention { order: BitOrder::Msb, base: 1 },
        Convention { order: BitOrder::Lsb, base: 1 },
    ];

    pub fn path_of(&self, label: u64, n: u32) -> Result<Path> {
        let i = label
            .checked_sub(self.base as u64)
            .ok_or(Error::IndexOutOfRange { n, index: label })?;
        Ok(index_to_path(ChannelIndex::new(n, i)?, self.order))
    }

    pub fn label_of(&self, p: &Path) -> u64 {
        path_to_index(p, self.order).index() + self.base as u64
    }

    /// Label of the path whose MSB-first code is `code`.
    pub fn label_of_code(&self, code: u64, n: usize) -> u64 {
        match self.order {
            BitOrder::Msb => code + self.base as u64,
            BitOrder::Lsb => reverse_bits(code, n) + self.base as u64,
        }
    }

    /// MSB-first code of the path carrying `label`.
    pub fn code_of_label(&self, label: u64, n: usize) -> Result<u64> {
        Ok(self.path_of(label, n as u32)?.code())
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.order {
            BitOrder::Msb => "msb-first",
            BitOrder::Lsb => "lsb-first",
        };
        write!(f, "{o}, {}-based", self.base)
    }
}

pub fn reverse_bits(code: u64, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    code.reverse_bits() >> (64 - n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("001").bits(), &[0, 0, 1]);
        assert!(p("").is_empty());
        assert_eq!(p("0^2 1^1"), p("001"));
        assert_eq!(p("0^{3}1^0 1"), p("0001"));
        assert_eq!(p("1^0"), Path::empty());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("012".parse::<Path>().is_err());
        assert!("0^-1".parse::<Path>().is_err());
        assert!("0^".parse::<Path>().is_err());
        assert!("0^{2".parse::<Path>().is_err());
        assert!("abc".parse::<Path>().is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(p("001").invert(), p("110"));
        assert_eq!(Path::empty().invert(), Path::empty());
        assert_eq!(p("1010").invert(), p("0101"));
    }

    #[test]
    fn counts_examples() {
        assert_eq!(p("11011011").counts(), (2, 6));
        assert_eq!(Path::empty().counts(), (0, 0));
        assert_eq!(p("000").counts(), (3, 0));
    }

    #[test]
    fn index_examples() {
        let c = ChannelIndex::new(10, 719).unwrap();
        assert_eq!(index_to_path(c, BitOrder::Msb), p("1011001111"));
        let c = ChannelIndex::new(10, 250).unwrap();
        assert_eq!(index_to_path(c, BitOrder::Msb), p("0011111010"));
        let c = ChannelIndex::new(3, 0).unwrap();
        assert_eq!(index_to_path(c, BitOrder::Msb), p("000"));
        assert_eq!(index_to_path(c, BitOrder::Lsb), p("000"));
        assert!(ChannelIndex::new(3, 8).is_err());
    }

    #[test]
    fn convention_labels() {
        let one = Convention { order: BitOrder::Msb, base: 1 };
        assert_eq!(one.path_of(1, 3).unwrap(), p("000"));
        assert!(one.path_of(0, 3).is_err());
        let lsb = Convention { order: BitOrder::Lsb, base: 0 };
        let q = p("1101");
        assert_eq!(lsb.label_of(&q), lsb.label_of_code(q.code(), 4));
        assert_eq!(lsb.code_of_label(lsb.label_of(&q), 4).unwrap(), q.code());
    }

    fn arb_path(max: usize) -> impl Strategy<Value = Path> {
        prop::collection::vec(0u8..2, 0..max).prop_map(|b| Path::new(b).unwrap())
    }

    proptest! {
        #[test]
        fn index_round_trip(n in 1u32..16, raw in any::<u64>(), lsb in any::<bool>()) {
            let i = raw % (1u64 << n);
            let order = if lsb { BitOrder::Lsb } else { BitOrder::Msb };
            let c = ChannelIndex::new(n, i).unwrap();
            prop_assert_eq!(path_to_index(&index_to_path(c, order), order), c);
        }

        #[test]
        fn concat_and_invert_laws(a in arb_path(8), b in arb_path(8), c in arb_path(8)) {
            prop_assert_eq!(a.concat(&b).len(), a.len() + b.len());
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.concat(&b).invert(), a.invert().concat(&b.invert()));
            prop_assert_eq!(a.invert().invert(), a.clone());
            let (n0, n1) = a.counts();
            prop_assert_eq!(n0 + n1, a.len());
        }

        #[test]
        fn display_parse_round_trip(a in arb_path(12)) {
            let s = if a.is_empty() { String::new() } else { a.to_string() };
            prop_assert_eq!(s.parse::<Path>().unwrap(), a);
        }
    }
}
