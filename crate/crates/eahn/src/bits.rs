//! Bit sequences and MSB-first bit-level I/O over byte buffers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite sequence of bits, packed MSB-first.
///
/// Used both for individual codewords and for whole payload streams.
/// Unused trailing bits of the last byte are always zero, so equality
/// and hashing work on the packed representation directly.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    bytes: Vec<u8>,
    len: usize,
}

impl Bits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// Builds the `len` low-order bits of `value`, most significant first.
    pub fn from_value(value: u64, len: usize) -> Self {
        assert!(len <= 64, "bit length {len} exceeds u64 width");
        let mut bits = Self::with_capacity(len);
        for k in (0..len).rev() {
            bits.push((value >> k) & 1 == 1);
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 1 << (7 - self.len % 8);
        }
        self.len += 1;
    }

    /// Appends all of `other`, merging bytewise across the bit boundary.
    pub fn extend(&mut self, other: &Bits) {
        if other.len == 0 {
            return;
        }
        let offset = self.len % 8;
        if offset == 0 {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
            return;
        }
        let spill = 8 - offset;
        for &byte in &other.bytes {
            *self.bytes.last_mut().unwrap() |= byte >> offset;
            self.bytes.push(byte << spill);
        }
        self.len += other.len;
        // bits past the end are zero because `other` keeps the same invariant
        self.bytes.truncate(self.len.div_ceil(8));
    }

    /// Bit at position `index` (0 is the first written bit).
    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        self.bytes[index / 8] >> (7 - index % 8) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// True iff `self` is a proper prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &Bits) -> bool {
        self.len < other.len && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(\"{self}\")")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Bits::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Format(format!("invalid bit character {ch:?}"))),
            }
        }
        Ok(bits)
    }
}

/// Convenience for tests and fixtures.
pub fn bits(s: &str) -> Bits {
    s.parse().expect("valid bit string")
}

/// Accumulates bits MSB-first into a byte buffer.
#[derive(Default)]
pub struct BitWriter {
    bits: Bits,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn write_bits(&mut self, bits: &Bits) {
        self.bits.extend(bits);
    }

    /// Writes the `width` low-order bits of `value`, most significant first.
    pub fn write_value(&mut self, value: u64, width: usize) {
        assert!(width <= 64);
        for k in (0..width).rev() {
            self.bits.push((value >> k) & 1 == 1);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    /// Consumes the writer; the stream must be byte aligned.
    pub fn into_bytes(self) -> Vec<u8> {
        assert!(
            self.bits.len().is_multiple_of(8),
            "bit stream not byte aligned: {} bits",
            self.bits.len()
        );
        self.bits.bytes
    }
}

/// Reads bits MSB-first from a byte slice.
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.data.len() * 8 {
            return Err(Error::Corrupt("bit stream truncated".into()));
        }
        let bit = self.data[self.pos / 8] >> (7 - self.pos % 8) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, count: usize) -> Result<Bits> {
        if self.pos + count > self.data.len() * 8 {
            return Err(Error::Corrupt("bit stream truncated".into()));
        }
        let start = self.pos / 8;
        let shift = self.pos % 8;
        let nbytes = count.div_ceil(8);
        let mut bytes = Vec::with_capacity(nbytes);
        if shift == 0 {
            bytes.extend_from_slice(&self.data[start..start + nbytes]);
        } else {
            for i in 0..nbytes {
                let hi = self.data[start + i] << shift;
                let lo = self
                    .data
                    .get(start + i + 1)
                    .map_or(0, |&b| b >> (8 - shift));
                bytes.push(hi | lo);
            }
        }
        if !count.is_multiple_of(8) {
            // keep the invariant: bits past `count` are zero
            *bytes.last_mut().unwrap() &= 0xFFu8 << (8 - count % 8);
        }
        self.pos += count;
        Ok(Bits { bytes, len: count })
    }

    /// Reads `width` bits as an unsigned value, most significant first.
    pub fn read_value(&mut self, width: usize) -> Result<u64> {
        assert!(width <= 64);
        let mut value = 0u64;
        for _ in 0..width {
            value = value << 1 | self.read_bit()? as u64;
        }
        Ok(value)
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.data.len() * 8 - self.pos
    }
}

/// Cursor over an in-memory [`Bits`] value; the decoding-side twin of
/// building a payload by `push`/`extend`.
pub struct BitCursor<'a> {
    bits: &'a Bits,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    pub fn new(bits: &'a Bits) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.bits.len() {
            return Err(Error::Corrupt("payload exhausted".into()));
        }
        let bit = self.bits.get(self.pos);
        self.pos += 1;
        Ok(bit)
    }

    /// Reads `width` bits as an unsigned value, most significant first.
    pub fn read_value(&mut self, width: usize) -> Result<u64> {
        let mut value = 0u64;
        for _ in 0..width {
            value = value << 1 | self.read_bit()? as u64;
        }
        Ok(value)
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }
}
