//! Rank/select over sequences of 2-bit symbols ("quads").
//!
//! Layout, for each superblock:
//!
//! - one 64-byte counter line holding four 128-bit groups, one per symbol. A group
//!   stores the absolute count of the symbol before the superblock (44 bits) and the
//!   counts before blocks 1..=7 relative to the superblock (12 bits each);
//! - the quads themselves, 32 per word, in 64-byte data lines of 256 quads.
//!
//! With [`QuadGeometry::Sb2048B256`] a block is exactly one data line and a rank
//! touches one counter line and one data line.
//!
//! Select samples store, for every symbol, the superblock holding its
//! 1st, 8193rd, 16385th, ... occurrence.

use alloc::vec::Vec;

use crate::broadword::{
    group_block, group_pack, group_superblock, quad_count_prefix, quad_eq_mask, BLOCKS_PER_GROUP,
};
use crate::codec::{self, Encode};
use crate::prefetch::prefetch_read;
use crate::{Error, Result, SELECT_SAMPLE_RATE};

/// Quads per 64-byte data line.
pub const QUADS_PER_LINE: usize = 256;
const WORDS_PER_LINE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadGeometry {
    /// Superblocks of 4096 quads, blocks of 512 quads (6.25% counter overhead).
    #[default]
    Sb4096B512,
    /// Superblocks of 2048 quads, blocks of 256 quads (12.5% counter overhead).
    Sb2048B256,
}

impl QuadGeometry {
    #[inline(always)]
    const fn superblock_shift(self) -> usize {
        match self {
            Self::Sb4096B512 => 12,
            Self::Sb2048B256 => 11,
        }
    }

    #[inline(always)]
    const fn block_shift(self) -> usize {
        self.superblock_shift() - 3
    }

    pub const fn superblock_len(self) -> usize {
        1 << self.superblock_shift()
    }

    pub const fn block_len(self) -> usize {
        1 << self.block_shift()
    }

    /// Tag used by the serialized form.
    pub const fn tag(self) -> u8 {
        match self {
            Self::Sb4096B512 => 0,
            Self::Sb2048B256 => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Self::Sb4096B512),
            1 => Ok(Self::Sb2048B256),
            _ => Err(Error::Decode("unknown quad vector geometry")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[repr(C, align(64))]
struct DataLine([u64; WORDS_PER_LINE]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[repr(C, align(64))]
struct CounterLine([u128; 4]);

/// Space accounting of a quad vector. Percentages are relative to the `2 * len`
/// bits of payload.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpaceReport {
    pub len: usize,
    pub data_bits: usize,
    pub stored_data_bits: usize,
    pub counter_bits: usize,
    pub select_sample_bits: usize,
    pub counter_overhead_pct: f64,
    pub select_overhead_pct: f64,
}

impl SpaceReport {
    pub fn total_bits(&self) -> usize {
        self.stored_data_bits + self.counter_bits + self.select_sample_bits
    }
}

/// Immutable quad vector with per-symbol rank and select.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RsQuadVector {
    len: usize,
    geometry: QuadGeometry,
    data: Vec<DataLine>,
    counters: Vec<CounterLine>,
    select_samples: [Vec<u32>; 4],
    totals: [usize; 4],
}

impl RsQuadVector {
    /// Builds from symbols in `0..4`.
    pub fn new(quads: &[u8], geometry: QuadGeometry) -> Result<Self> {
        if let Some(&bad) = quads.iter().find(|&&q| q > 3) {
            return Err(Error::InvalidSymbol { symbol: bad as u32, sigma: 4 });
        }
        Ok(Self::from_fn(quads.len(), geometry, |i| quads[i]))
    }

    /// Builds a vector of `len` quads where quad `i` is `f(i) & 3`.
    pub fn from_fn<F: FnMut(usize) -> u8>(len: usize, geometry: QuadGeometry, mut f: F) -> Self {
        let sb_len = geometry.superblock_len();
        let n_superblocks = len / sb_len + 1;
        let n_lines = n_superblocks * sb_len / QUADS_PER_LINE;
        let mut data = alloc::vec![DataLine::default(); n_lines];
        for i in 0..len {
            let q = (f(i) & 3) as u64;
            data[i / QUADS_PER_LINE].0[(i / 32) % WORDS_PER_LINE] |= q << (2 * (i % 32));
        }
        let mut qv = Self {
            len,
            geometry,
            data,
            counters: Vec::new(),
            select_samples: Default::default(),
            totals: [0; 4],
        };
        qv.build_counters();
        qv
    }

    fn build_counters(&mut self) {
        let sb_len = self.geometry.superblock_len();
        let words_per_block = self.geometry.block_len() / 32;
        let n_superblocks = self.data.len() * QUADS_PER_LINE / sb_len;
        self.counters = Vec::with_capacity(n_superblocks);

        let mut totals = [0usize; 4];
        let mut word = 0;
        for _ in 0..n_superblocks {
            let base = totals;
            let mut blocks = [[0usize; BLOCKS_PER_GROUP]; 4];
            for b in 0..BLOCKS_PER_GROUP {
                for s in 0..4 {
                    blocks[s][b] = totals[s] - base[s];
                }
                for _ in 0..words_per_block {
                    let w = self.word(word);
                    // padding lanes read as symbol 0 and must not be counted
                    let valid = self.len.saturating_sub(word * 32).min(32);
                    for (s, t) in totals.iter_mut().enumerate() {
                        *t += quad_count_prefix(w, s as u8, valid);
                    }
                    word += 1;
                }
            }
            let mut line = CounterLine::default();
            for s in 0..4 {
                line.0[s] = group_pack(base[s], &blocks[s]);
            }
            self.counters.push(line);
        }
        self.totals = totals;
        self.build_select_samples();
    }

    fn build_select_samples(&mut self) {
        let sb_shift = self.geometry.superblock_shift();
        let mut seen = [0usize; 4];
        for w in 0..self.len.div_ceil(32) {
            let valid = (self.len - w * 32).min(32);
            let sb = ((w * 32) >> sb_shift) as u32;
            for s in 0..4 {
                let c = quad_count_prefix(self.word(w), s as u8, valid);
                let samples = &mut self.select_samples[s];
                while samples.len() * SELECT_SAMPLE_RATE < seen[s] + c {
                    samples.push(sb);
                }
                seen[s] += c;
            }
        }
    }

    #[inline(always)]
    fn word(&self, w: usize) -> u64 {
        self.data[w / WORDS_PER_LINE].0[w % WORDS_PER_LINE]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn geometry(&self) -> QuadGeometry {
        self.geometry
    }

    /// Total occurrences of `symbol` (`symbol < 4`).
    #[inline]
    pub fn occurrences(&self, symbol: u8) -> usize {
        self.totals[symbol as usize]
    }

    pub fn get(&self, i: usize) -> Result<u8> {
        if i >= self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.get_unchecked(i))
    }

    /// Quad at `i`. Requires `i < len`; padding reads as 0.
    #[inline(always)]
    pub fn get_unchecked(&self, i: usize) -> u8 {
        ((self.word(i / 32) >> (2 * (i % 32))) & 3) as u8
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get_unchecked(i))
    }

    fn check_symbol(symbol: u8) -> Result<()> {
        if symbol > 3 {
            return Err(Error::InvalidSymbol { symbol: symbol as u32, sigma: 4 });
        }
        Ok(())
    }

    /// Occurrences of `symbol` in `[0, i)`.
    pub fn rank(&self, symbol: u8, i: usize) -> Result<usize> {
        Self::check_symbol(symbol)?;
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.rank_unchecked(symbol, i))
    }

    /// Rank without checks. Requires `symbol < 4` and `i <= len`.
    #[inline(always)]
    pub fn rank_unchecked(&self, symbol: u8, i: usize) -> usize {
        let mut rank = self.rank_block_unchecked(symbol, i);
        let start = (i >> self.geometry.block_shift()) << (self.geometry.block_shift() - 5);
        let end = i / 32;
        for w in start..end {
            rank += quad_eq_mask(self.word(w), symbol).count_ones() as usize;
        }
        if i % 32 != 0 {
            rank += quad_count_prefix(self.word(end), symbol, i % 32);
        }
        rank
    }

    /// Occurrences of `symbol` before the start of the block holding `i`, read from the
    /// counters only. Underestimates the rank by less than one block length.
    #[inline(always)]
    pub fn rank_block_unchecked(&self, symbol: u8, i: usize) -> usize {
        let sb_shift = self.geometry.superblock_shift();
        let group = self.counters[i >> sb_shift].0[symbol as usize];
        let block = (i & ((1 << sb_shift) - 1)) >> self.geometry.block_shift();
        group_superblock(group) + group_block(group, block)
    }

    /// Smallest `p` with `rank(symbol, p) == j`, i.e. one past the `j`-th occurrence.
    pub fn select(&self, symbol: u8, j: usize) -> Result<usize> {
        Self::check_symbol(symbol)?;
        if j == 0 || j > self.totals[symbol as usize] {
            return Err(Error::NotFound { symbol: symbol as u32, nth: j });
        }
        Ok(self.select_unchecked(symbol, j))
    }

    /// Select without checks. Requires `symbol < 4` and `1 <= j <= occurrences(symbol)`.
    pub fn select_unchecked(&self, symbol: u8, j: usize) -> usize {
        let s = symbol as usize;
        let samples = &self.select_samples[s];
        let m = (j - 1) / SELECT_SAMPLE_RATE;
        let mut lo = samples[m] as usize;
        let mut hi = samples
            .get(m + 1)
            .map_or(self.counters.len() - 1, |&x| x as usize);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if group_superblock(self.counters[mid].0[s]) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sb = lo;
        let group = self.counters[sb].0[s];
        let mut rem = j - group_superblock(group);
        let mut block = 0;
        while block + 1 < BLOCKS_PER_GROUP && group_block(group, block + 1) < rem {
            block += 1;
        }
        rem -= group_block(group, block);

        let mut w = (sb * self.geometry.superblock_len() + block * self.geometry.block_len()) / 32;
        loop {
            let mask = quad_eq_mask(self.word(w), symbol);
            let pc = mask.count_ones() as usize;
            if rem <= pc {
                let bit = crate::broadword::select_in_word(mask, rem - 1);
                return w * 32 + bit / 2 + 1;
            }
            rem -= pc;
            w += 1;
        }
    }

    /// Index of the counter line (one per superblock) read by a rank at `i`.
    #[inline]
    pub fn counter_line(&self, i: usize) -> usize {
        i >> self.geometry.superblock_shift()
    }

    /// Index of the data line holding quad `i`.
    #[inline]
    pub fn data_line(&self, i: usize) -> usize {
        i / QUADS_PER_LINE
    }

    pub fn counter_line_count(&self) -> usize {
        self.counters.len()
    }

    pub fn data_line_count(&self) -> usize {
        self.data.len()
    }

    /// Prefetches counter line `line`; out-of-range lines are ignored.
    #[inline(always)]
    pub fn prefetch_counter_line(&self, line: usize) {
        if let Some(l) = self.counters.get(line) {
            prefetch_read(l);
        }
    }

    /// Prefetches data line `line`; out-of-range lines are ignored.
    #[inline(always)]
    pub fn prefetch_data_line(&self, line: usize) {
        if let Some(l) = self.data.get(line) {
            prefetch_read(l);
        }
    }

    /// Requests the two cache lines a rank at `i` reads. Has no observable effect.
    #[inline(always)]
    pub fn rank_prefetch_hint(&self, _symbol: u8, i: usize) {
        self.prefetch_counter_line(self.counter_line(i));
        self.prefetch_data_line(self.data_line(i));
    }

    pub fn space_report(&self) -> SpaceReport {
        let data_bits = 2 * self.len;
        let counter_bits = self.counters.len() * 512;
        let select_sample_bits = self.select_samples.iter().map(|s| s.len() * 32).sum();
        let pct = |bits: usize| {
            if data_bits == 0 {
                0.0
            } else {
                100.0 * bits as f64 / data_bits as f64
            }
        };
        SpaceReport {
            len: self.len,
            data_bits,
            stored_data_bits: self.data.len() * 512,
            counter_bits,
            select_sample_bits,
            counter_overhead_pct: pct(counter_bits),
            select_overhead_pct: pct(select_sample_bits),
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.space_report().total_bits()
    }

    /// Unpacked counters: for each superblock and symbol, the prefix count before every
    /// block of the superblock (absolute).
    pub fn block_prefix_counts(&self, superblock: usize, symbol: u8) -> [usize; 8] {
        let g = self.counters[superblock].0[symbol as usize];
        core::array::from_fn(|b| group_superblock(g) + group_block(g, b))
    }

    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let geometry = QuadGeometry::from_tag(codec::get_u8(input)?)?;
        let len = codec::get_usize(input)?;
        let n_superblocks = len / geometry.superblock_len() + 1;
        let n_lines = n_superblocks * geometry.superblock_len() / QUADS_PER_LINE;
        if n_lines.checked_mul(64).map_or(true, |b| b > input.len()) {
            return Err(Error::Decode("quad vector length exceeds remaining data"));
        }
        let mut data = Vec::with_capacity(n_lines);
        for _ in 0..n_lines {
            let mut line = DataLine::default();
            for w in line.0.iter_mut() {
                *w = codec::get_u64(input)?;
            }
            data.push(line);
        }
        let mut counters = alloc::vec![CounterLine::default(); n_superblocks];
        for s in 0..4 {
            for line in counters.iter_mut() {
                line.0[s] = codec::get_u128(input)?;
            }
        }
        let mut select_samples: [Vec<u32>; 4] = Default::default();
        for samples in select_samples.iter_mut() {
            let n = codec::get_len(input, 4)?;
            samples.reserve_exact(n);
            for _ in 0..n {
                samples.push(codec::get_u32(input)?);
            }
        }
        let last = counters[n_superblocks - 1];
        let tail_start = (n_superblocks - 1) * geometry.superblock_len();
        let mut qv = Self {
            len,
            geometry,
            data,
            counters,
            select_samples,
            totals: [0; 4],
        };
        // totals = last superblock base + quads of the final partial superblock
        let mut totals: [usize; 4] = core::array::from_fn(|s| group_superblock(last.0[s]));
        for i in tail_start..len {
            totals[qv.get_unchecked(i) as usize] += 1;
        }
        if totals.iter().sum::<usize>() != len {
            return Err(Error::Decode("quad vector counters inconsistent with length"));
        }
        for s in 0..4 {
            let expected = totals[s].div_ceil(SELECT_SAMPLE_RATE);
            if qv.select_samples[s].len() != expected
                || qv.select_samples[s].iter().any(|&sb| sb as usize >= n_superblocks)
            {
                return Err(Error::Decode("quad vector select samples inconsistent"));
            }
        }
        qv.totals = totals;
        Ok(qv)
    }
}

/// Geometry tag, length, data words, counter groups per symbol, select samples per
/// symbol (each list prefixed by its length). All little-endian.
impl Encode for RsQuadVector {
    fn encode(&self, out: &mut Vec<u8>) {
        codec::put_u8(out, self.geometry.tag());
        codec::put_usize(out, self.len);
        for line in &self.data {
            for &w in &line.0 {
                codec::put_u64(out, w);
            }
        }
        for s in 0..4 {
            for line in &self.counters {
                codec::put_u128(out, line.0[s]);
            }
        }
        for samples in &self.select_samples {
            codec::put_usize(out, samples.len());
            for &x in samples {
                codec::put_u32(out, x);
            }
        }
    }
}
