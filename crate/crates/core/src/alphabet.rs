//! Dense remapping of input symbols to `0..sigma`.

use alloc::vec::Vec;

use crate::codec::{self, Encode};
use crate::{Error, Result};

/// Largest alphabet the wavelet matrices accept.
pub const MAX_SIGMA: usize = 1 << 16;

/// Input symbol types accepted by the builders.
pub trait Symbol: Copy {
    fn to_u32(self) -> u32;
}

impl Symbol for u8 {
    #[inline(always)]
    fn to_u32(self) -> u32 {
        self as u32
    }
}

impl Symbol for u16 {
    #[inline(always)]
    fn to_u32(self) -> u32 {
        self as u32
    }
}

impl Symbol for u32 {
    #[inline(always)]
    fn to_u32(self) -> u32 {
        self
    }
}

/// Bijection between the distinct symbols of a text and dense codes `0..sigma`,
/// preserving order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    decode: Vec<u16>,
    encode: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl Alphabet {
    /// Collects the distinct symbols of `text`. Symbols must be below 2^16.
    pub fn from_text<T: Symbol>(text: &[T]) -> Result<Self> {
        let mut present = alloc::vec![false; MAX_SIGMA];
        for &s in text {
            let v = s.to_u32() as usize;
            if v >= MAX_SIGMA {
                return Err(Error::InvalidSymbol { symbol: v as u32, sigma: MAX_SIGMA as u32 });
            }
            present[v] = true;
        }
        let decode = (0..MAX_SIGMA)
            .filter(|&v| present[v])
            .map(|v| v as u16)
            .collect();
        Ok(Self::from_decode_table(decode))
    }

    /// The alphabet `0..sigma` mapped to itself.
    pub fn identity(sigma: usize) -> Result<Self> {
        if sigma > MAX_SIGMA {
            return Err(Error::InvalidParameter("alphabet larger than 2^16"));
        }
        Ok(Self::from_decode_table((0..sigma).map(|v| v as u16).collect()))
    }

    /// Builds from a strictly increasing table of original symbols.
    pub fn from_decode_table(decode: Vec<u16>) -> Self {
        debug_assert!(decode.windows(2).all(|w| w[0] < w[1]));
        let size = decode.last().map_or(0, |&m| m as usize + 1);
        let mut encode = alloc::vec![ABSENT; size];
        for (code, &orig) in decode.iter().enumerate() {
            encode[orig as usize] = code as u32;
        }
        Self { decode, encode }
    }

    /// Number of distinct symbols.
    pub fn len(&self) -> usize {
        self.decode.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decode.is_empty()
    }

    /// Dense code of an original symbol, `None` if it does not occur.
    #[inline]
    pub fn encode(&self, symbol: u32) -> Option<u32> {
        match self.encode.get(symbol as usize) {
            Some(&c) if c != ABSENT => Some(c),
            _ => None,
        }
    }

    /// Original symbol of a dense code.
    #[inline]
    pub fn decode(&self, code: u32) -> Option<u32> {
        self.decode.get(code as usize).map(|&v| v as u32)
    }

    pub fn decode_table(&self) -> &[u16] {
        &self.decode
    }

    /// Recodes `text`; every symbol must belong to the alphabet.
    pub fn encode_text<T: Symbol>(&self, text: &[T]) -> Result<Vec<u16>> {
        text.iter()
            .map(|&s| {
                self.encode(s.to_u32()).map(|c| c as u16).ok_or(Error::InvalidSymbol {
                    symbol: s.to_u32(),
                    sigma: self.len() as u32,
                })
            })
            .collect()
    }

    pub fn decode_from(input: &mut &[u8]) -> Result<Self> {
        let n = codec::get_len(input, 2)?;
        let mut decode = Vec::with_capacity(n);
        for _ in 0..n {
            decode.push(codec::get_u16(input)?);
        }
        if decode.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Decode("decode table not strictly increasing"));
        }
        Ok(Self::from_decode_table(decode))
    }
}

/// Number of entries followed by the original symbol of each code (u16 each).
impl Encode for Alphabet {
    fn encode(&self, out: &mut Vec<u8>) {
        codec::put_usize(out, self.decode.len());
        for &v in &self.decode {
            codec::put_u16(out, v);
        }
    }
}

/// Checks `2 <= sigma <= 2^16` and that every symbol is below `sigma`.
pub(crate) fn check_text<T: Symbol>(text: &[T], sigma: usize) -> Result<()> {
    if sigma < 2 {
        return Err(Error::InvalidParameter("alphabet size must be at least 2"));
    }
    if sigma > MAX_SIGMA {
        return Err(Error::InvalidParameter("alphabet larger than 2^16"));
    }
    if let Some(s) = text.iter().find(|s| s.to_u32() as usize >= sigma) {
        return Err(Error::InvalidSymbol { symbol: s.to_u32(), sigma: sigma as u32 });
    }
    Ok(())
}

/// Bits needed to write codes `0..sigma` (at least 1).
pub fn bit_width(sigma: usize) -> u32 {
    if sigma <= 2 {
        1
    } else {
        usize::BITS - (sigma - 1).leading_zeros()
    }
}
