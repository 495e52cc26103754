//! Fixed-width row payloads. Bit 0 corresponds to DQ bit 0.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A row's worth of data bits, LSB-first (bit 0 = DQ bit 0).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Payload {
    width: u32,
    words: Vec<u64>,
}

impl Payload {
    pub fn zero(width: u32) -> Self {
        let words = vec![0u64; Self::word_count(width)];
        Payload { width, words }
    }

    pub fn ones(width: u32) -> Self {
        let mut p = Self::zero(width);
        for b in 0..width {
            p.set(b, true);
        }
        p
    }

    pub fn from_fn(width: u32, f: impl Fn(u32) -> bool) -> Self {
        let mut p = Self::zero(width);
        for b in 0..width {
            p.set(b, f(b));
        }
        p
    }

    fn word_count(width: u32) -> usize {
        ((width as usize) + 63) / 64
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn get(&self, bit: u32) -> bool {
        debug_assert!(bit < self.width);
        (self.words[(bit / 64) as usize] >> (bit % 64)) & 1 == 1
    }

    pub fn set(&mut self, bit: u32, value: bool) {
        debug_assert!(bit < self.width);
        let w = &mut self.words[(bit / 64) as usize];
        if value {
            *w |= 1 << (bit % 64);
        } else {
            *w &= !(1 << (bit % 64));
        }
    }

    pub fn invert(&self) -> Self {
        Payload::from_fn(self.width, |b| !self.get(b))
    }

    /// Bit positions where `self` and `other` differ.
    pub fn diff_bits(&self, other: &Payload) -> Vec<u32> {
        assert_eq!(self.width, other.width);
        (0..self.width).filter(|&b| self.get(b) != other.get(b)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        (0..self.width).filter(|&b| self.get(b)).count() as u32
    }

    /// Fixed-width hex, most significant nibble first; bit 0 is the LSB.
    pub fn to_hex(&self) -> String {
        let nibbles = ((self.width + 3) / 4) as usize;
        let mut s = String::with_capacity(nibbles);
        for i in (0..nibbles).rev() {
            let mut n = 0u8;
            for k in 0..4 {
                let bit = (i * 4 + k) as u32;
                if bit < self.width && self.get(bit) {
                    n |= 1 << k;
                }
            }
            s.push(char::from_digit(n as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(width: u32, s: &str) -> Option<Self> {
        let nibbles = ((width + 3) / 4) as usize;
        if s.len() != nibbles {
            return None;
        }
        let mut p = Self::zero(width);
        for (i, ch) in s.chars().rev().enumerate() {
            let n = ch.to_digit(16)? as u8;
            for k in 0..4 {
                let bit = (i * 4 + k) as u32;
                if bit < width {
                    p.set(bit, (n >> k) & 1 == 1);
                } else if (n >> k) & 1 == 1 {
                    return None; // stray bits beyond the row width
                }
            }
        }
        Some(p)
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Payload({}:{})", self.width, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let p = Payload::from_fn(64, |b| b % 3 == 0);
        let s = p.to_hex();
        assert_eq!(s.len(), 16);
        assert_eq!(Payload::from_hex(64, &s).unwrap(), p);
    }

    #[test]
    fn bit_zero_is_lsb() {
        let mut p = Payload::zero(8);
        p.set(0, true);
        assert_eq!(p.to_hex(), "01");
        p.set(7, true);
        assert_eq!(p.to_hex(), "81");
    }

    #[test]
    fn from_hex_rejects_bad_input() {
        assert!(Payload::from_hex(64, "123").is_none());
        assert!(Payload::from_hex(8, "zz").is_none());
        // width 6 has two padding bits in the top nibble
        assert!(Payload::from_hex(6, "ff").is_none());
        assert!(Payload::from_hex(6, "3f").is_some());
    }
}
