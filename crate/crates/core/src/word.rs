use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A finite binary word, one `0`/`1` value per byte.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        Word(Vec::with_capacity(cap))
    }

    /// Builds a word from raw values; anything nonzero becomes `1`.
    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Self {
        Word(bits.into_iter().map(|b| (b != 0) as u8).collect())
    }

    /// Parses ASCII `0`/`1` text. Whitespace anywhere is ignored, so both one
    /// digit per line and a single unbroken string are accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse(alloc::format!(
                        "unexpected character {c:?} at offset {i}"
                    )))
                }
            }
        }
        Ok(Word(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push(bit & 1);
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn to_bit_string(&self) -> String {
        self.0.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

impl core::ops::Index<usize> for Word {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Word::from_bits(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_lines_and_strings() {
        let a = Word::parse("0\n1\n1\n0\n").unwrap();
        let b = Word::parse("  0110 ").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_bit_string(), "0110");
    }

    #[test]
    fn parse_rejects_other_symbols() {
        assert!(matches!(Word::parse("01x"), Err(Error::Parse(_))));
    }
}
