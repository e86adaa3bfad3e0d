//! Plain bit vector with constant-time rank and sampled select.
//!
//! The rank directory uses the same interleaved 128-bit counter group as the quad
//! vector: one absolute superblock count plus seven block counts relative to the
//! superblock. Select samples record the superblock of every
//! [`SELECT_SAMPLE_RATE`]-th occurrence of each bit value.

use alloc::vec::Vec;

use crate::broadword::{
    group_block, group_pack, group_superblock, ones_prefix, select_in_word, BLOCKS_PER_GROUP,
};
use crate::codec::{self, Encode};
use crate::prefetch::prefetch_read;
use crate::{Error, Result, SELECT_SAMPLE_RATE};

/// Superblock/block sizes of the rank directory, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitGeometry {
    /// 4096-bit superblocks split in 512-bit blocks (3.125% directory overhead).
    #[default]
    Sb4096B512,
    /// 512-bit superblocks split in 64-bit blocks (25% directory overhead). Used for
    /// the small predictor bitmaps, where one counter group and one data word answer
    /// every rank.
    Sb512B64,
}

impl BitGeometry {
    #[inline(always)]
    const fn superblock_shift(self) -> usize {
        match self {
            Self::Sb4096B512 => 12,
            Self::Sb512B64 => 9,
        }
    }

    #[inline(always)]
    const fn block_shift(self) -> usize {
        self.superblock_shift() - 3
    }

    pub const fn superblock_bits(self) -> usize {
        1 << self.superblock_shift()
    }

    pub const fn block_bits(self) -> usize {
        1 << self.block_shift()
    }
}

/// Immutable bit vector answering access, rank and select.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RsBitVector {
    len: usize,
    ones: usize,
    geometry: BitGeometry,
    words: Vec<u64>,
    directory: Vec<u128>,
    select1_samples: Vec<u32>,
    select0_samples: Vec<u32>,
}

impl RsBitVector {
    /// Builds from a sequence of bits with the default 4096/512 geometry.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self::from_bits_with(bits, BitGeometry::default())
    }

    pub fn from_bits_with<I: IntoIterator<Item = bool>>(bits: I, geometry: BitGeometry) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len, geometry)
    }

    /// Builds from packed words (bit `i` is bit `i % 64` of word `i / 64`).
    /// Bits at positions `>= len` are cleared.
    ///
    /// # Panics
    /// If `words` holds fewer than `len` bits.
    pub fn from_words(mut words: Vec<u64>, len: usize, geometry: BitGeometry) -> Self {
        assert!(words.len() * 64 >= len, "not enough words for {len} bits");
        words.truncate(len.div_ceil(64));
        if len % 64 != 0 {
            *words.last_mut().unwrap() &= (1u64 << (len % 64)) - 1;
        }
        let mut bv = Self {
            len,
            ones: 0,
            geometry,
            words,
            directory: Vec::new(),
            select1_samples: Vec::new(),
            select0_samples: Vec::new(),
        };
        bv.build_directory();
        bv
    }

    fn build_directory(&mut self) {
        let sb_bits = self.geometry.superblock_bits();
        let words_per_block = self.geometry.block_bits() / 64;
        let n_superblocks = self.len / sb_bits + 1;
        self.directory = Vec::with_capacity(n_superblocks);

        let mut total = 0usize;
        let mut word = 0usize;
        for _ in 0..n_superblocks {
            let base = total;
            let mut blocks = [0usize; BLOCKS_PER_GROUP];
            for block in blocks.iter_mut() {
                *block = total - base;
                for _ in 0..words_per_block {
                    total += self.words.get(word).map_or(0, |w| w.count_ones() as usize);
                    word += 1;
                }
            }
            self.directory.push(group_pack(base, &blocks));
        }
        self.ones = total;

        let mut ones = 0usize;
        let mut zeros = 0usize;
        let sb_shift = self.geometry.superblock_shift();
        for (w, &bits) in self.words.iter().enumerate() {
            let valid = (self.len - w * 64).min(64);
            let pc = bits.count_ones() as usize;
            let zc = valid - pc;
            let sb = ((w * 64) >> sb_shift) as u32;
            while self.select1_samples.len() * SELECT_SAMPLE_RATE < ones + pc {
                self.select1_samples.push(sb);
            }
            while self.select0_samples.len() * SELECT_SAMPLE_RATE < zeros + zc {
                self.select0_samples.push(sb);
            }
            ones += pc;
            zeros += zc;
        }
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
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn geometry(&self) -> BitGeometry {
        self.geometry
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.get_unchecked(i))
    }

    /// Bit at `i`. Requires `i < len`; out-of-range positions may panic.
    #[inline(always)]
    pub fn get_unchecked(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get_unchecked(i))
    }

    /// Number of ones in `[0, i)`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.rank1_unchecked(i))
    }

    /// Number of zeros in `[0, i)`.
    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    /// Rank without the bounds check. Requires `i <= len`.
    #[inline(always)]
    pub fn rank1_unchecked(&self, i: usize) -> usize {
        let sb_shift = self.geometry.superblock_shift();
        let b_shift = self.geometry.block_shift();
        let group = self.directory[i >> sb_shift];
        let block = (i & ((1 << sb_shift) - 1)) >> b_shift;
        let mut rank = group_superblock(group) + group_block(group, block);

        let end = i >> 6;
        for w in &self.words[(i >> b_shift) << (b_shift - 6)..end] {
            rank += w.count_ones() as usize;
        }
        if i & 63 != 0 {
            rank += ones_prefix(self.words[end], i & 63);
        }
        rank
    }

    #[inline(always)]
    pub fn rank0_unchecked(&self, i: usize) -> usize {
        i - self.rank1_unchecked(i)
    }

    /// Smallest `p` with `rank1(p) == j`, i.e. one past the `j`-th one.
    pub fn select1(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.ones {
            return Err(Error::NotFound { symbol: 1, nth: j });
        }
        Ok(self.select_impl::<true>(j))
    }

    /// Smallest `p` with `rank0(p) == j`, i.e. one past the `j`-th zero.
    pub fn select0(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.count_zeros() {
            return Err(Error::NotFound { symbol: 0, nth: j });
        }
        Ok(self.select_impl::<false>(j))
    }

    /// Select without the range check. Requires `1 <= j <= count_ones()`.
    #[inline]
    pub fn select1_unchecked(&self, j: usize) -> usize {
        self.select_impl::<true>(j)
    }

    #[inline]
    pub fn select0_unchecked(&self, j: usize) -> usize {
        self.select_impl::<false>(j)
    }

    fn select_impl<const ONES: bool>(&self, j: usize) -> usize {
        let sb_bits = self.geometry.superblock_bits();
        let block_bits = self.geometry.block_bits();
        let count_sb = |sb: usize| {
            let ones = group_superblock(self.directory[sb]);
            if ONES {
                ones
            } else {
                sb * sb_bits - ones
            }
        };
        let samples = if ONES { &self.select1_samples } else { &self.select0_samples };

        let m = (j - 1) / SELECT_SAMPLE_RATE;
        let mut lo = samples[m] as usize;
        let mut hi = samples
            .get(m + 1)
            .map_or(self.directory.len() - 1, |&s| s as usize);
        // last superblock whose prefix count is below j
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if count_sb(mid) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let group = self.directory[sb];
        let mut rem = j - count_sb(sb);

        let count_block = |b: usize| {
            let ones = group_block(group, b);
            if ONES {
                ones
            } else {
                b * block_bits - ones
            }
        };
        let mut block = 0;
        while block + 1 < BLOCKS_PER_GROUP && count_block(block + 1) < rem {
            block += 1;
        }
        rem -= count_block(block);

        let mut w = (sb * sb_bits + block * block_bits) / 64;
        loop {
            let word = if ONES { self.words[w] } else { !self.words[w] };
            let pc = word.count_ones() as usize;
            if rem <= pc {
                return w * 64 + select_in_word(word, rem - 1) + 1;
            }
            rem -= pc;
            w += 1;
        }
    }

    /// Logical cache line holding the counters used by a rank at `i`.
    #[inline]
    pub fn counter_line(&self, i: usize) -> usize {
        (i >> self.geometry.superblock_shift()) / 4
    }

    /// Logical cache line holding bit `i` (512 bits per line).
    #[inline]
    pub fn data_line(&self, i: usize) -> usize {
        i / 512
    }

    /// Issues prefetches for the directory group and the data word used by a rank
    /// at `i`. Positions past the end are ignored.
    #[inline]
    pub fn prefetch(&self, i: usize) {
        if let Some(g) = self.directory.get(i >> self.geometry.superblock_shift()) {
            prefetch_read(g);
        }
        if let Some(w) = self.words.get(i >> 6) {
            prefetch_read(w);
        }
    }

    /// Prefetches logical counter line `line`; out-of-range lines are ignored.
    #[inline]
    pub fn prefetch_counter_line(&self, line: usize) {
        if let Some(g) = self.directory.get(line * 4) {
            prefetch_read(g);
        }
    }

    /// Prefetches logical data line `line`; out-of-range lines are ignored.
    #[inline]
    pub fn prefetch_data_line(&self, line: usize) {
        if let Some(w) = self.words.get(line * 8) {
            prefetch_read(w);
        }
    }

    /// Ones before the start of the block holding `i`, read from the directory only.
    /// Requires `i <= len`.
    #[inline(always)]
    pub fn rank1_block_unchecked(&self, i: usize) -> usize {
        let sb_shift = self.geometry.superblock_shift();
        let group = self.directory[i >> sb_shift];
        let block = (i & ((1 << sb_shift) - 1)) >> self.geometry.block_shift();
        group_superblock(group) + group_block(group, block)
    }

    /// Start of the block holding `i`.
    #[inline(always)]
    pub fn block_start(&self, i: usize) -> usize {
        (i >> self.geometry.block_shift()) << self.geometry.block_shift()
    }

    /// Bits used by the packed data words.
    pub fn data_bits(&self) -> usize {
        self.words.len() * 64
    }

    /// Bits used by the rank directory.
    pub fn directory_bits(&self) -> usize {
        self.directory.len() * 128
    }

    /// Bits used by the select samples (both bit values).
    pub fn select_bits(&self) -> usize {
        (self.select1_samples.len() + self.select0_samples.len()) * 32
    }

    pub fn size_in_bits(&self) -> usize {
        self.data_bits() + self.directory_bits() + self.select_bits()
    }

    /// Reads a vector written by [`Encode::encode`]; the directory is rebuilt with
    /// `geometry`.
    pub fn decode(input: &mut &[u8], geometry: BitGeometry) -> Result<Self> {
        let len = codec::get_usize(input)?;
        let n_words = len.div_ceil(64);
        if n_words.checked_mul(8).map_or(true, |b| b > input.len()) {
            return Err(Error::Decode("bit vector length exceeds remaining data"));
        }
        let mut words = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            words.push(codec::get_u64(input)?);
        }
        if len % 64 != 0 && words[n_words - 1] >> (len % 64) != 0 {
            return Err(Error::Decode("bits set beyond bit vector length"));
        }
        Ok(Self::from_words(words, len, geometry))
    }
}

/// Length in bits followed by the little-endian data words.
impl Encode for RsBitVector {
    fn encode(&self, out: &mut Vec<u8>) {
        codec::put_usize(out, self.len);
        for &w in &self.words {
            codec::put_u64(out, w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};

    fn parse(s: &str) -> RsBitVector {
        RsBitVector::from_bits(s.bytes().map(|b| b == b'1'))
    }

    fn check_against_scan(bits: &[bool], geometry: BitGeometry) {
        let bv = RsBitVector::from_bits_with(bits.iter().copied(), geometry);
        assert_eq!(bv.len(), bits.len());
        let mut ones = 0;
        let mut zeros = 0;
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(bv.rank1_unchecked(i), ones, "rank1({i})");
            assert_eq!(bv.get_unchecked(i), b);
            if b {
                ones += 1;
                assert_eq!(bv.select1_unchecked(ones), i + 1, "select1({ones})");
            } else {
                zeros += 1;
                assert_eq!(bv.select0_unchecked(zeros), i + 1, "select0({zeros})");
            }
        }
        assert_eq!(bv.rank1(bits.len()).unwrap(), ones);
        assert_eq!(bv.count_ones(), ones);
        assert!(bv.select1(ones + 1).is_err());
        assert!(bv.select0(zeros + 1).is_err());
    }

    #[test]
    fn empty() {
        let bv = RsBitVector::from_bits(core::iter::empty());
        assert_eq!(bv.len(), 0);
        assert_eq!(bv.rank1(0), Ok(0));
        assert!(bv.rank1(1).is_err());
        assert!(bv.select1(1).is_err());
        assert!(bv.get(0).is_err());
    }

    #[test]
    fn root_plane_of_running_example() {
        let bv = parse("000011010101001");
        assert_eq!(bv.len(), 15);
        assert_eq!(bv.count_ones(), 6);
        assert_eq!(bv.get(4), Ok(true));
        assert_eq!(bv.get(0), Ok(false));
        assert_eq!(bv.rank1(0), Ok(0));
        assert_eq!(bv.rank1(15), Ok(6));
        assert_eq!(bv.select1(1), Ok(5));
        assert_eq!(bv.rank0(15), Ok(9));
        assert_eq!(bv.get(15), Err(Error::OutOfRange { index: 15, len: 15 }));
        assert!(bv.rank1(16).is_err());
    }

    #[test]
    fn single_bit() {
        assert_eq!(parse("1").select1(1), Ok(1));
        assert_eq!(parse("0").select0(1), Ok(1));
        assert!(parse("1").select1(0).is_err());
    }

    #[test]
    fn random_vectors_match_scan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for &geometry in &[BitGeometry::Sb4096B512, BitGeometry::Sb512B64] {
            for &(len, density) in &[
                (100_000usize, 0.5f64),
                (70_000, 0.01),
                (70_000, 0.99),
                (4096, 0.5),
                (512, 0.3),
                (64, 0.5),
            ] {
                let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
                check_against_scan(&bits, geometry);
            }
        }
    }

    #[test]
    fn long_runs_cross_many_select_samples() {
        let mut bits = vec![true; 3 * SELECT_SAMPLE_RATE + 17];
        bits.extend(core::iter::repeat(false).take(40_000));
        bits.extend(core::iter::repeat(true).take(SELECT_SAMPLE_RATE + 1));
        check_against_scan(&bits, BitGeometry::Sb4096B512);
        check_against_scan(&bits, BitGeometry::Sb512B64);
    }

    #[test]
    fn encode_decode() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let bits: Vec<bool> = (0..10_001).map(|_| rng.gen()).collect();
        let bv = RsBitVector::from_bits(bits);
        let mut buf = Vec::new();
        bv.encode(&mut buf);
        assert_eq!(buf.len(), 8 + 157 * 8);
        let back = RsBitVector::decode(&mut buf.as_slice(), BitGeometry::Sb4096B512).unwrap();
        assert_eq!(back, bv);
        assert!(RsBitVector::decode(&mut &buf[..20], BitGeometry::Sb4096B512).is_err());
    }

    #[test]
    fn dense_geometry_overhead_is_a_quarter() {
        let bv = RsBitVector::from_words(vec![0xAAAA; 8 * 64], 512 * 64, BitGeometry::Sb512B64);
        // one group per 512 bits plus the trailing group
        assert_eq!(bv.directory_bits(), 65 * 128);
        assert_eq!(bv.data_bits(), 512 * 64);
    }
}
