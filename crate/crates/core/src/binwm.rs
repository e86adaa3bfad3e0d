//! Binary wavelet matrix and level-wise wavelet tree.
//!
//! Both store one [`RsBitVector`] per level instead of a single concatenated vector,
//! so the position bookkeeping of the textbook rank loops is kept per level.

use alloc::vec::Vec;

use crate::alphabet::{bit_width, check_text, Symbol};
use crate::bitvec::RsBitVector;
use crate::{Error, Result};

/// Wavelet matrix with one bit per level: level `l` holds the `l`-th most significant
/// bit of each code, in the order obtained by stably sorting on the previous bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryWaveletMatrix {
    len: usize,
    sigma: usize,
    width: u32,
    planes: Vec<RsBitVector>,
    zeros: Vec<usize>,
}

impl BinaryWaveletMatrix {
    pub fn new<T: Symbol>(text: &[T], sigma: usize) -> Result<Self> {
        check_text(text, sigma)?;
        let width = bit_width(sigma);
        let mut cur: Vec<T> = text.to_vec();
        let mut next: Vec<T> = Vec::with_capacity(text.len());
        let mut planes = Vec::with_capacity(width as usize);
        let mut zeros = Vec::with_capacity(width as usize);
        for level in 0..width {
            let shift = width - 1 - level;
            let bit = |s: T| (s.to_u32() >> shift) & 1 == 1;
            let plane = RsBitVector::from_bits(cur.iter().map(|&s| bit(s)));
            zeros.push(plane.count_zeros());
            planes.push(plane);
            next.clear();
            next.extend(cur.iter().copied().filter(|&s| !bit(s)));
            next.extend(cur.iter().copied().filter(|&s| bit(s)));
            core::mem::swap(&mut cur, &mut next);
        }
        Ok(Self { len: text.len(), sigma, width, planes, zeros })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn levels(&self) -> usize {
        self.width as usize
    }

    /// Number of zeros on each level.
    pub fn zeros(&self) -> &[usize] {
        &self.zeros
    }

    pub fn plane(&self, level: usize) -> &RsBitVector {
        &self.planes[level]
    }

    fn bit(&self, symbol: u32, level: usize) -> bool {
        (symbol >> (self.width as usize - 1 - level)) & 1 == 1
    }

    fn check_symbol(&self, symbol: u32) -> Result<()> {
        if symbol as usize >= self.sigma {
            return Err(Error::InvalidSymbol { symbol, sigma: self.sigma as u32 });
        }
        Ok(())
    }

    pub fn access(&self, i: usize) -> Result<u32> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        let mut pos = i;
        let mut symbol = 0u32;
        for (level, plane) in self.planes.iter().enumerate() {
            let bit = plane.get_unchecked(pos);
            symbol = symbol << 1 | bit as u32;
            pos = if bit {
                self.zeros[level] + plane.rank1_unchecked(pos)
            } else {
                plane.rank0_unchecked(pos)
            };
        }
        Ok(symbol)
    }

    /// Occurrences of `symbol` in `[0, i)`.
    pub fn rank(&self, symbol: u32, i: usize) -> Result<usize> {
        self.rank_traced(symbol, i, |_| {})
    }

    /// Rank that reports every plane it visits to `visit`.
    ///
    /// The loop tracks the start of the symbol's interval on the current level and
    /// the offset of `i` inside it; every level is visited, even once the offset
    /// reaches zero.
    pub fn rank_traced<F: FnMut(usize)>(&self, symbol: u32, i: usize, mut visit: F) -> Result<usize> {
        self.check_symbol(symbol)?;
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        let mut start = 0usize;
        let mut offset = i;
        for (level, plane) in self.planes.iter().enumerate() {
            visit(level);
            let before = plane.rank1_unchecked(start);
            let position = plane.rank1_unchecked(start + offset) - before;
            if self.bit(symbol, level) {
                offset = position;
                start = self.zeros[level] + before;
            } else {
                offset -= position;
                start -= before;
            }
        }
        Ok(offset)
    }

    /// Smallest `p` with `rank(symbol, p) == j`.
    pub fn select(&self, symbol: u32, j: usize) -> Result<usize> {
        self.check_symbol(symbol)?;
        if j == 0 || j > self.rank(symbol, self.len)? {
            return Err(Error::NotFound { symbol, nth: j });
        }
        let mut start = 0usize;
        for (level, plane) in self.planes.iter().enumerate() {
            start = if self.bit(symbol, level) {
                self.zeros[level] + plane.rank1_unchecked(start)
            } else {
                plane.rank0_unchecked(start)
            };
        }
        let mut pos = start + j - 1;
        for (level, plane) in self.planes.iter().enumerate().rev() {
            pos = if self.bit(symbol, level) {
                plane.select1_unchecked(pos - self.zeros[level] + 1) - 1
            } else {
                plane.select0_unchecked(pos + 1) - 1
            };
        }
        Ok(pos + 1)
    }
}

/// Level-wise wavelet tree: level `l` concatenates, left to right, the bit vectors
/// of the nodes whose symbols share an `l`-bit prefix. Only rank is provided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryWaveletTree {
    len: usize,
    sigma: usize,
    width: u32,
    planes: Vec<RsBitVector>,
}

impl BinaryWaveletTree {
    pub fn new<T: Symbol>(text: &[T], sigma: usize) -> Result<Self> {
        check_text(text, sigma)?;
        let width = bit_width(sigma);
        let mut cur: Vec<u32> = text.iter().map(|s| s.to_u32()).collect();
        let mut planes = Vec::with_capacity(width as usize);
        for level in 0..width {
            let shift = width - 1 - level;
            planes.push(RsBitVector::from_bits(cur.iter().map(|&s| (s >> shift) & 1 == 1)));
            // group by the (level + 1)-bit prefix, keeping text order inside a node
            cur.sort_by_key(|&s| s >> shift);
        }
        Ok(Self { len: text.len(), sigma, width, planes })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn levels(&self) -> usize {
        self.width as usize
    }

    pub fn plane(&self, level: usize) -> &RsBitVector {
        &self.planes[level]
    }

    pub fn rank(&self, symbol: u32, i: usize) -> Result<usize> {
        self.rank_traced(symbol, i, |_| {})
    }

    /// Rank by narrowing the node interval `[start, start + size)` level by level.
    pub fn rank_traced<F: FnMut(usize)>(&self, symbol: u32, i: usize, mut visit: F) -> Result<usize> {
        if symbol as usize >= self.sigma {
            return Err(Error::InvalidSymbol { symbol, sigma: self.sigma as u32 });
        }
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        let mut start = 0usize;
        let mut size = self.len;
        let mut i = i;
        for (level, plane) in self.planes.iter().enumerate() {
            visit(level);
            let before = plane.rank1_unchecked(start);
            let position = plane.rank1_unchecked(start + i) - before;
            let ones = plane.rank1_unchecked(start + size) - before;
            if (symbol >> (self.width as usize - 1 - level)) & 1 == 1 {
                start += size - ones;
                size = ones;
                i = position;
            } else {
                size -= ones;
                i -= position;
            }
        }
        Ok(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Alphabet;
    use alloc::string::String;
    use rand::{Rng, SeedableRng};

    fn example() -> (Vec<u16>, usize) {
        let text = b"accessandselect";
        let a = Alphabet::from_text(text).unwrap();
        (a.encode_text(text).unwrap(), a.len())
    }

    fn plane_string(bv: &RsBitVector) -> String {
        bv.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    fn code(c: u8) -> u32 {
        Alphabet::from_text(b"accessandselect").unwrap().encode(c as u32).unwrap()
    }

    #[test]
    fn running_example_matrix() {
        let (text, sigma) = example();
        let wm = BinaryWaveletMatrix::new(&text, sigma).unwrap();
        assert_eq!(plane_string(wm.plane(0)), "000011010101001");
        assert_eq!(plane_string(wm.plane(1)), "000101110110101");
        assert_eq!(plane_string(wm.plane(2)), "011011010110001");
        assert_eq!(wm.zeros(), &[9, 7, 7]);
        assert_eq!(wm.rank(code(b's'), 11), Ok(3));
        assert_eq!(wm.access(0), Ok(code(b'a')));
        assert_eq!(wm.select(code(b'c'), 2), Ok(3));
        assert_eq!(wm.rank(code(b'a'), 0), Ok(0));
    }

    #[test]
    fn running_example_tree() {
        let (text, sigma) = example();
        let wt = BinaryWaveletTree::new(&text, sigma).unwrap();
        assert_eq!(plane_string(wt.plane(0)), "000011010101001");
        // acceadeec | ssnslt
        assert_eq!(plane_string(wt.plane(1)), "000101110110101");
        // accac edee nl ssst
        assert_eq!(plane_string(wt.plane(2)), "011011011100001");
        assert_eq!(wt.rank(code(b'e'), 13), Ok(3));
        assert_eq!(wt.rank(code(b'e'), 0), Ok(0));
    }

    #[test]
    fn constant_text() {
        let text = [1u8; 100];
        let wm = BinaryWaveletMatrix::new(&text, 2).unwrap();
        assert_eq!(wm.zeros(), &[0]);
        assert_eq!(wm.rank(1, 100), Ok(100));
        assert_eq!(wm.rank(0, 100), Ok(0));
        assert!(wm.select(0, 1).is_err());
        let wm = BinaryWaveletMatrix::new(&[0u8; 10], 2).unwrap();
        assert_eq!(wm.zeros(), &[10]);
    }

    #[test]
    fn errors() {
        assert!(BinaryWaveletMatrix::new(&[0u8, 5], 4).is_err());
        assert!(BinaryWaveletMatrix::new(&[0u8], 1).is_err());
        let wm = BinaryWaveletMatrix::new(&[0u8, 1, 2], 3).unwrap();
        assert!(wm.rank(3, 0).is_err());
        assert!(wm.rank(0, 4).is_err());
        assert!(wm.access(3).is_err());
        assert!(wm.select(0, 2).is_err());
        assert!(wm.select(0, 0).is_err());
    }

    #[test]
    fn random_texts_match_scan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let sigma = 256;
        let text: Vec<u16> = (0..1024).map(|_| rng.gen_range(0..sigma as u16)).collect();
        let wm = BinaryWaveletMatrix::new(&text, sigma).unwrap();
        let wt = BinaryWaveletTree::new(&text, sigma).unwrap();
        for (i, &s) in text.iter().enumerate() {
            assert_eq!(wm.access(i), Ok(s as u32));
        }
        for _ in 0..10_000 {
            let s = rng.gen_range(0..sigma as u32);
            let i = rng.gen_range(0..=text.len());
            let want = text[..i].iter().filter(|&&c| c as u32 == s).count();
            assert_eq!(wm.rank(s, i), Ok(want));
            assert_eq!(wt.rank(s, i), Ok(want));
        }
        for s in 0..sigma as u32 {
            let mut j = 0;
            for (p, &c) in text.iter().enumerate() {
                if c as u32 == s {
                    j += 1;
                    assert_eq!(wm.select(s, j), Ok(p + 1));
                }
            }
        }
    }

    #[test]
    fn every_level_is_visited() {
        let (text, sigma) = example();
        let wm = BinaryWaveletMatrix::new(&text, sigma).unwrap();
        let wt = BinaryWaveletTree::new(&text, sigma).unwrap();
        for i in 0..=text.len() {
            let mut visits = 0;
            wm.rank_traced(0, i, |_| visits += 1).unwrap();
            assert_eq!(visits, 3);
            let mut visits = 0;
            wt.rank_traced(7, i, |_| visits += 1).unwrap();
            assert_eq!(visits, 3);
        }
    }
}
