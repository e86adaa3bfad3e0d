//! 4-ary wavelet matrix.
//!
//! A code of `w` bits is consumed two bits at a time from the most significant end:
//! there are `w / 2` quad levels, each an [`RsQuadVector`], and when `w` is odd a last
//! level stores the remaining bit in an [`RsBitVector`]. The total number of levels
//! is `ceil(w / 2)`.
//!
//! After each quad level the sequence is stably partitioned by the level's quad in
//! the order `0, 2, 1, 3` (bit-reversed `00, 10, 01, 11`), so on the running example
//! `accessandselect` the four intervals end at 5, 7, 11 and 15.

use alloc::vec::Vec;
use arrayvec::ArrayVec;

use crate::alphabet::{bit_width, check_text, Alphabet, Symbol};
use crate::bitvec::{BitGeometry, RsBitVector};
use crate::codec::{self, Encode};
use crate::predictor::{self, PlannerConfig, PrefetchPlan, Predictor};
use crate::quadvec::{QuadGeometry, RsQuadVector, SpaceReport};
use crate::{Error, Result};

/// Order in which the four quad intervals are laid out on the next level.
pub const LEVEL_ORDER: [u8; 4] = [0, 2, 1, 3];

/// Upper bound on the number of levels (alphabets up to 2^16).
pub const MAX_LEVELS: usize = 8;

const MAGIC: &[u8; 4] = b"QWTK";
const FORMAT_VERSION: u16 = 1;

/// One level of the matrix.
#[derive(Debug, Clone, Copy)]
pub enum Level<'a> {
    Quad(&'a RsQuadVector),
    Bit(&'a RsBitVector),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadWaveletMatrix {
    len: usize,
    sigma: usize,
    width: u32,
    geometry: QuadGeometry,
    planes: Vec<RsQuadVector>,
    offsets: Vec<[usize; 4]>,
    tail: Option<RsBitVector>,
    tail_zeros: usize,
    alphabet: Alphabet,
    predictor: Option<Predictor>,
}

impl QuadWaveletMatrix {
    /// Builds over a text of codes in `0..sigma`, `2 <= sigma <= 2^16`.
    pub fn new<T: Symbol>(text: &[T], sigma: usize, geometry: QuadGeometry) -> Result<Self> {
        check_text(text, sigma)?;
        let alphabet = Alphabet::identity(sigma)?;
        Ok(Self::build(text, sigma, geometry, alphabet))
    }

    /// Remaps the distinct symbols of `text` to dense codes first; the alphabet is
    /// kept so that callers can translate symbols with [`Self::alphabet`].
    pub fn from_text<T: Symbol>(text: &[T], geometry: QuadGeometry) -> Result<Self> {
        let alphabet = Alphabet::from_text(text)?;
        let codes = alphabet.encode_text(text)?;
        Self::with_alphabet(&codes, alphabet, geometry)
    }

    /// Builds over codes already remapped through `alphabet`; sigma is the
    /// alphabet size (at least 2).
    pub fn with_alphabet<T: Symbol>(codes: &[T], alphabet: Alphabet, geometry: QuadGeometry) -> Result<Self> {
        let sigma = alphabet.len().max(2);
        check_text(codes, sigma)?;
        Ok(Self::build(codes, sigma, geometry, alphabet))
    }

    fn build<T: Symbol>(text: &[T], sigma: usize, geometry: QuadGeometry, alphabet: Alphabet) -> Self {
        let n = text.len();
        let width = bit_width(sigma);
        let quad_levels = (width / 2) as usize;
        let mut planes = Vec::with_capacity(quad_levels);
        let mut offsets = Vec::with_capacity(quad_levels);

        // level 0 reads the input directly; later levels ping-pong between two buffers
        let mut cur: Vec<T> = Vec::new();
        let mut next: Vec<T> = Vec::new();
        for k in 0..quad_levels {
            let shift = width as usize - 2 - 2 * k;
            let src: &[T] = if k == 0 { text } else { &cur };
            let qv = RsQuadVector::from_fn(n, geometry, |i| (src[i].to_u32() >> shift) as u8 & 3);
            let mut c = [0usize; 4];
            let mut acc = 0;
            for q in LEVEL_ORDER {
                c[q as usize] = acc;
                acc += qv.occurrences(q);
            }
            let last = k + 1 == quad_levels && width % 2 == 0;
            if !last && n > 0 {
                next.clear();
                next.resize(n, src[0]);
                let mut pos = c;
                for &s in src {
                    let q = ((s.to_u32() >> shift) & 3) as usize;
                    next[pos[q]] = s;
                    pos[q] += 1;
                }
                core::mem::swap(&mut cur, &mut next);
            }
            planes.push(qv);
            offsets.push(c);
        }
        drop(next);

        let tail = (width % 2 == 1).then(|| {
            let src: &[T] = if quad_levels == 0 { text } else { &cur };
            RsBitVector::from_bits(src.iter().map(|s| s.to_u32() & 1 == 1))
        });
        let tail_zeros = tail.as_ref().map_or(0, |t| t.count_zeros());
        Self {
            len: n,
            sigma,
            width,
            geometry,
            planes,
            offsets,
            tail,
            tail_zeros,
            alphabet,
            predictor: None,
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

    /// Size of the code alphabet.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Bits per code, `ceil(log2 sigma)` (at least 1).
    pub fn bit_width(&self) -> u32 {
        self.width
    }

    /// Total number of levels, including the bit level.
    #[inline]
    pub fn levels(&self) -> usize {
        self.planes.len() + self.tail.is_some() as usize
    }

    pub fn quad_levels(&self) -> usize {
        self.planes.len()
    }

    pub fn geometry(&self) -> QuadGeometry {
        self.geometry
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn level(&self, k: usize) -> Level<'_> {
        match self.planes.get(k) {
            Some(qv) => Level::Quad(qv),
            None => Level::Bit(self.tail.as_ref().expect("level out of range")),
        }
    }

    pub fn quad_plane(&self, k: usize) -> &RsQuadVector {
        &self.planes[k]
    }

    pub fn tail_plane(&self) -> Option<&RsBitVector> {
        self.tail.as_ref()
    }

    /// Start of each quad's interval on the level after quad level `k`, indexed by
    /// quad value.
    pub fn offsets(&self, k: usize) -> [usize; 4] {
        self.offsets[k]
    }

    /// Inclusive interval ends after quad level `k`, in layout order.
    pub fn level_order_ends(&self, k: usize) -> [usize; 4] {
        let c = self.offsets[k];
        LEVEL_ORDER.map(|q| c[q as usize] + self.planes[k].occurrences(q))
    }

    /// Zeros of the bit level (0 without one).
    pub fn tail_zeros(&self) -> usize {
        self.tail_zeros
    }

    /// The quad (or bit, on the bit level) of code `symbol` read at level `k`.
    #[inline(always)]
    pub fn level_symbol(&self, symbol: u32, k: usize) -> u8 {
        if k < self.planes.len() {
            ((symbol >> (self.width as usize - 2 - 2 * k)) & 3) as u8
        } else {
            (symbol & 1) as u8
        }
    }

    /// Position on level `k + 1` of the first element with quad `q` at or after
    /// position `pos` of level `k`.
    #[inline(always)]
    pub fn step(&self, k: usize, q: u8, pos: usize) -> usize {
        match self.planes.get(k) {
            Some(qv) => self.offsets[k][q as usize] + qv.rank_unchecked(q, pos),
            None => self.tail_step(q, pos, self.tail().rank1_unchecked(pos)),
        }
    }

    /// Like [`Self::step`] with the rank replaced by the counter value of the block
    /// holding `pos`; reads no data lines and never overshoots `step`.
    #[inline(always)]
    pub fn step_block(&self, k: usize, q: u8, pos: usize) -> usize {
        match self.planes.get(k) {
            Some(qv) => self.offsets[k][q as usize] + qv.rank_block_unchecked(q, pos),
            None => {
                let t = self.tail();
                let start = t.block_start(pos);
                self.tail_step(q, start, t.rank1_block_unchecked(pos))
            }
        }
    }

    #[inline(always)]
    fn tail_step(&self, bit: u8, pos: usize, ones: usize) -> usize {
        if bit == 1 {
            self.tail_zeros + ones
        } else {
            pos - ones
        }
    }

    #[inline(always)]
    fn tail(&self) -> &RsBitVector {
        self.tail.as_ref().unwrap()
    }

    /// Interval start of `symbol` on level `k` (or at the bottom for `k = levels`).
    pub fn offset_of(&self, k: usize, q: u8) -> usize {
        match self.offsets.get(k) {
            Some(c) => c[q as usize],
            None => q as usize * self.tail_zeros,
        }
    }

    /// Maximum number of positions a [`Self::step_block`] result can be short of
    /// [`Self::step`] on quad levels.
    pub fn block_len(&self) -> usize {
        self.geometry.block_len()
    }

    /// Counter line read by a rank at `pos` on level `k`.
    #[inline(always)]
    pub fn counter_line(&self, k: usize, pos: usize) -> usize {
        match self.level(k) {
            Level::Quad(qv) => qv.counter_line(pos),
            Level::Bit(bv) => bv.counter_line(pos),
        }
    }

    /// Data line holding position `pos` of level `k`.
    #[inline(always)]
    pub fn data_line(&self, k: usize, pos: usize) -> usize {
        match self.level(k) {
            Level::Quad(qv) => qv.data_line(pos),
            Level::Bit(bv) => bv.data_line(pos),
        }
    }

    /// First position of the block holding `pos` on level `k`.
    #[inline(always)]
    pub fn block_start(&self, k: usize, pos: usize) -> usize {
        match self.level(k) {
            Level::Quad(_) => pos & !(self.geometry.block_len() - 1),
            Level::Bit(bv) => bv.block_start(pos),
        }
    }

    #[inline(always)]
    pub fn prefetch_counter_line(&self, k: usize, line: usize) {
        match self.level(k) {
            Level::Quad(qv) => qv.prefetch_counter_line(line),
            Level::Bit(bv) => bv.prefetch_counter_line(line),
        }
    }

    #[inline(always)]
    pub fn prefetch_data_line(&self, k: usize, line: usize) {
        match self.level(k) {
            Level::Quad(qv) => qv.prefetch_data_line(line),
            Level::Bit(bv) => bv.prefetch_data_line(line),
        }
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
        for (k, qv) in self.planes.iter().enumerate() {
            let q = qv.get_unchecked(pos);
            symbol = symbol << 2 | q as u32;
            pos = self.offsets[k][q as usize] + qv.rank_unchecked(q, pos);
        }
        if let Some(t) = &self.tail {
            symbol = symbol << 1 | t.get_unchecked(pos) as u32;
        }
        Ok(symbol)
    }

    /// Occurrences of code `symbol` in `[0, i)`.
    pub fn rank(&self, symbol: u32, i: usize) -> Result<usize> {
        self.check_rank(symbol, i)?;
        Ok(self.rank_unchecked(symbol, i))
    }

    fn check_rank(&self, symbol: u32, i: usize) -> Result<()> {
        self.check_symbol(symbol)?;
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(())
    }

    /// Rank without checks. Requires `symbol < sigma` and `i <= len`.
    ///
    /// Follows both ends of the query range down the levels: `b` starts at 0, `r` at
    /// `i`, and the answer is their distance at the bottom.
    #[inline]
    pub fn rank_unchecked(&self, symbol: u32, i: usize) -> usize {
        let mut b = 0;
        let mut r = i;
        for k in 0..self.levels() {
            let q = self.level_symbol(symbol, k);
            b = self.step(k, q, b);
            r = self.step(k, q, r);
        }
        r - b
    }

    /// Rank that calls `visit(level, b, r)` with the chain positions entering every
    /// level.
    pub fn rank_traced<F: FnMut(usize, usize, usize)>(&self, symbol: u32, i: usize, mut visit: F) -> Result<usize> {
        self.check_rank(symbol, i)?;
        let mut b = 0;
        let mut r = i;
        for k in 0..self.levels() {
            visit(k, b, r);
            let q = self.level_symbol(symbol, k);
            b = self.step(k, q, b);
            r = self.step(k, q, r);
        }
        Ok(r - b)
    }

    /// Positions reached after each level when starting from `start` on level 0.
    pub fn exact_chain(&self, symbol: u32, start: usize) -> ArrayVec<usize, MAX_LEVELS> {
        let mut out = ArrayVec::new();
        let mut x = start;
        for k in 0..self.levels() {
            x = self.step(k, self.level_symbol(symbol, k), x);
            out.push(x);
        }
        out
    }

    /// Smallest `p` with `rank(symbol, p) == j`.
    pub fn select(&self, symbol: u32, j: usize) -> Result<usize> {
        self.check_symbol(symbol)?;
        let levels = self.levels();
        let mut b = 0;
        let mut r = self.len;
        for k in 0..levels {
            let q = self.level_symbol(symbol, k);
            b = self.step(k, q, b);
            r = self.step(k, q, r);
        }
        if j == 0 || j > r - b {
            return Err(Error::NotFound { symbol, nth: j });
        }
        let mut pos = b + j - 1;
        for k in (0..levels).rev() {
            let q = self.level_symbol(symbol, k);
            let nth = pos - self.offset_of(k, q) + 1;
            pos = match self.level(k) {
                Level::Quad(qv) => qv.select_unchecked(q, nth),
                Level::Bit(bv) if q == 1 => bv.select1_unchecked(nth),
                Level::Bit(bv) => bv.select0_unchecked(nth),
            } - 1;
        }
        Ok(pos + 1)
    }

    pub fn predictor(&self) -> Option<&Predictor> {
        self.predictor.as_ref()
    }

    /// Builds and attaches the practical predictor with blocks of `block` positions
    /// (the `--epsilon` of the command line).
    pub fn build_predictor(&mut self, block: usize) -> Result<()> {
        let p = Predictor::practical(self, block)?;
        self.predictor = Some(p);
        Ok(())
    }

    /// Attaches a predictor built for this matrix.
    pub fn set_predictor(&mut self, predictor: Predictor) -> Result<()> {
        predictor.check_matches(self)?;
        self.predictor = Some(predictor);
        Ok(())
    }

    pub fn take_predictor(&mut self) -> Option<Predictor> {
        self.predictor.take()
    }

    /// Cache lines a rank query is predicted to touch. Empty without a predictor.
    pub fn plan_prefetch(&self, symbol: u32, i: usize, config: &PlannerConfig) -> Result<PrefetchPlan> {
        self.check_rank(symbol, i)?;
        let mut plan = PrefetchPlan::default();
        if let Some(p) = &self.predictor {
            predictor::plan_into(self, p, symbol, i, config, &mut plan)?;
        }
        Ok(plan)
    }

    /// Same answer as [`Self::rank`]. With a predictor attached, the counter and data
    /// lines of every level are prefetched for both chains before the exact loop
    /// runs; without one this is a plain rank.
    pub fn rank_prefetch(&self, symbol: u32, i: usize) -> Result<usize> {
        self.check_rank(symbol, i)?;
        Ok(self.rank_prefetch_unchecked(symbol, i))
    }

    #[inline]
    pub fn rank_prefetch_unchecked(&self, symbol: u32, i: usize) -> usize {
        self.rank_prefetch_with_unchecked(symbol, i, &PlannerConfig::default())
    }

    /// [`Self::rank_prefetch_unchecked`] with an explicit planner configuration.
    #[inline]
    pub fn rank_prefetch_with_unchecked(&self, symbol: u32, i: usize, config: &PlannerConfig) -> usize {
        if let Some(p) = &self.predictor {
            let _ = predictor::plan_into(self, p, symbol, i, config, &mut predictor::Issue);
        }
        self.rank_unchecked(symbol, i)
    }

    /// Space of every quad level.
    pub fn quad_space_reports(&self) -> Vec<SpaceReport> {
        self.planes.iter().map(|qv| qv.space_report()).collect()
    }

    /// Bits of the planes, their directories and select samples.
    pub fn planes_size_in_bits(&self) -> usize {
        self.planes.iter().map(|qv| qv.size_in_bits()).sum::<usize>()
            + self.tail.as_ref().map_or(0, |t| t.size_in_bits())
    }

    pub fn predictor_size_in_bits(&self) -> usize {
        self.predictor.as_ref().map_or(0, |p| p.size_in_bits())
    }

    pub fn size_in_bits(&self) -> usize {
        self.planes_size_in_bits()
            + self.offsets.len() * 4 * 64
            + self.alphabet.len() * 16
            + self.predictor_size_in_bits()
    }

    /// Decodes a matrix written by [`Encode::encode`].
    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        if input.len() < 4 || &input[..4] != MAGIC {
            return Err(Error::Decode("bad magic"));
        }
        *input = &input[4..];
        if codec::get_u16(input)? != FORMAT_VERSION {
            return Err(Error::Decode("unsupported format version"));
        }
        let sigma = codec::get_u32(input)? as usize;
        let len = codec::get_usize(input)?;
        let width = codec::get_u8(input)? as u32;
        let geometry = QuadGeometry::from_tag(codec::get_u8(input)?)?;
        let has_predictor = match codec::get_u8(input)? {
            0 => false,
            1 => true,
            _ => return Err(Error::Decode("bad predictor flag")),
        };
        if !(2..=crate::alphabet::MAX_SIGMA).contains(&sigma) || width != bit_width(sigma) {
            return Err(Error::Decode("inconsistent alphabet size"));
        }
        let quad_levels = (width / 2) as usize;
        let mut planes = Vec::with_capacity(quad_levels);
        for _ in 0..quad_levels {
            let qv = RsQuadVector::decode(input)?;
            if qv.len() != len || qv.geometry() != geometry {
                return Err(Error::Decode("plane does not match header"));
            }
            planes.push(qv);
        }
        let tail = if width % 2 == 1 {
            let t = RsBitVector::decode(input, BitGeometry::default())?;
            if t.len() != len {
                return Err(Error::Decode("bit level does not match header"));
            }
            Some(t)
        } else {
            None
        };
        let mut offsets = Vec::with_capacity(quad_levels);
        for qv in &planes {
            let c: [usize; 4] = [
                codec::get_usize(input)?,
                codec::get_usize(input)?,
                codec::get_usize(input)?,
                codec::get_usize(input)?,
            ];
            let mut acc = 0;
            for q in LEVEL_ORDER {
                if c[q as usize] != acc {
                    return Err(Error::Decode("offset table inconsistent with counts"));
                }
                acc += qv.occurrences(q);
            }
            offsets.push(c);
        }
        let alphabet = Alphabet::decode_from(input)?;
        let tail_zeros = tail.as_ref().map_or(0, |t| t.count_zeros());
        let mut m = Self {
            len,
            sigma,
            width,
            geometry,
            planes,
            offsets,
            tail,
            tail_zeros,
            alphabet,
            predictor: None,
        };
        if has_predictor {
            let p = Predictor::decode(input)?;
            m.set_predictor(p)?;
        }
        Ok(m)
    }
}

/// Magic `QWTK`, format version (u16), sigma (u32), n (u64), bit width (u8),
/// geometry tag (u8), predictor flag (u8), the quad planes, the bit level if any,
/// the offset tables, the decode table and the predictor if present.
impl Encode for QuadWaveletMatrix {
    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        codec::put_u16(out, FORMAT_VERSION);
        codec::put_u32(out, self.sigma as u32);
        codec::put_usize(out, self.len);
        codec::put_u8(out, self.width as u8);
        codec::put_u8(out, self.geometry.tag());
        codec::put_u8(out, self.predictor.is_some() as u8);
        for qv in &self.planes {
            qv.encode(out);
        }
        if let Some(t) = &self.tail {
            t.encode(out);
        }
        for c in &self.offsets {
            for &x in c {
                codec::put_usize(out, x);
            }
        }
        Encode::encode(&self.alphabet, out);
        if let Some(p) = &self.predictor {
            p.encode(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec;
    use rand::{Rng, SeedableRng};

    fn bits(bv: impl Iterator<Item = bool>) -> String {
        bv.map(|b| if b { '1' } else { '0' }).collect()
    }

    fn example() -> QuadWaveletMatrix {
        QuadWaveletMatrix::from_text(b"accessandselect", QuadGeometry::Sb4096B512).unwrap()
    }

    fn code(m: &QuadWaveletMatrix, c: u8) -> u32 {
        m.alphabet().encode(c as u32).unwrap()
    }

    #[test]
    fn running_example_layout() {
        let m = example();
        assert_eq!(m.levels(), 2);
        assert_eq!(m.quad_levels(), 1);
        let qv = m.quad_plane(0);
        assert_eq!(bits(qv.iter().map(|q| q >> 1 == 1)), "000011010101001");
        assert_eq!(bits(qv.iter().map(|q| q & 1 == 1)), "000111001110101");
        assert_eq!(m.level_order_ends(0), [5, 7, 11, 15]);
        assert_eq!(m.offsets(0), [0, 7, 5, 11]);
        assert_eq!(bits(m.tail_plane().unwrap().iter()), "011011010110001");
        assert_eq!(m.tail_zeros(), 7);
    }

    #[test]
    fn running_example_queries() {
        let m = example();
        assert_eq!(m.rank(code(&m, b's'), 15), Ok(3));
        assert_eq!(m.rank(code(&m, b'e'), 13), Ok(3));
        assert_eq!(m.rank(0, 0), Ok(0));
        assert_eq!(m.access(6).map(|c| m.alphabet().decode(c)), Ok(Some(b'a' as u32)));
        assert_eq!(m.select(code(&m, b'a'), 2), Ok(7));
        assert_eq!(m.select(code(&m, b'c'), 3), Ok(14));
        assert!(m.select(code(&m, b'c'), 4).is_err());
    }

    #[test]
    fn four_symbols_use_one_level() {
        let m = QuadWaveletMatrix::new(&[3u8, 1, 0, 2, 2], 4, QuadGeometry::Sb2048B256).unwrap();
        assert_eq!(m.levels(), 1);
        assert!(m.tail_plane().is_none());
        assert_eq!(m.rank(2, 5), Ok(2));
        assert_eq!(m.select(2, 2), Ok(5));
    }

    #[test]
    fn binary_alphabet_uses_only_the_bit_level() {
        let m = QuadWaveletMatrix::new(&[1u8, 0, 1, 1], 2, QuadGeometry::default()).unwrap();
        assert_eq!(m.levels(), 1);
        assert_eq!(m.quad_levels(), 0);
        assert_eq!(m.rank(1, 4), Ok(3));
        assert_eq!(m.select(0, 1), Ok(2));
        assert_eq!(m.access(2), Ok(1));
    }

    #[test]
    fn errors() {
        assert!(QuadWaveletMatrix::new(&[0u8, 9], 8, QuadGeometry::default()).is_err());
        assert!(QuadWaveletMatrix::new(&[0u8], 1, QuadGeometry::default()).is_err());
        assert!(QuadWaveletMatrix::new(&[0u32], (1 << 16) + 1, QuadGeometry::default()).is_err());
        let m = example();
        assert!(m.rank(8, 0).is_err());
        assert!(m.rank(0, 16).is_err());
        assert!(m.access(15).is_err());
        assert!(m.select(0, 0).is_err());
    }

    #[test]
    fn empty_text() {
        let m = QuadWaveletMatrix::new::<u8>(&[], 300, QuadGeometry::default()).unwrap();
        assert_eq!(m.levels(), 5);
        assert_eq!(m.rank(299, 0), Ok(0));
        assert!(m.select(0, 1).is_err());
    }

    #[test]
    fn random_texts_match_scan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for &sigma in &[2usize, 3, 4, 5, 16, 17, 255, 256, 257, 1000] {
            for g in [QuadGeometry::Sb4096B512, QuadGeometry::Sb2048B256] {
                let n = rng.gen_range(0..5000);
                let text: Vec<u16> = (0..n).map(|_| rng.gen_range(0..sigma) as u16).collect();
                let m = QuadWaveletMatrix::new(&text, sigma, g).unwrap();
                for (i, &s) in text.iter().enumerate() {
                    assert_eq!(m.access(i), Ok(s as u32));
                }
                for _ in 0..2000 {
                    let s = rng.gen_range(0..sigma) as u32;
                    let i = rng.gen_range(0..=n);
                    let want = text[..i].iter().filter(|&&c| c as u32 == s).count();
                    assert_eq!(m.rank(s, i), Ok(want));
                }
                let mut seen = vec![0usize; sigma];
                for (p, &s) in text.iter().enumerate() {
                    seen[s as usize] += 1;
                    assert_eq!(m.select(s as u32, seen[s as usize]), Ok(p + 1));
                }
            }
        }
    }

    #[test]
    fn traced_levels() {
        let m = example();
        let mut visited = Vec::new();
        m.rank_traced(3, 9, |k, _, _| visited.push(k)).unwrap();
        assert_eq!(visited, [0, 1]);
    }

    #[test]
    fn block_step_never_overshoots() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        let text: Vec<u16> = (0..20_000).map(|_| rng.gen_range(0..200)).collect();
        let m = QuadWaveletMatrix::new(&text, 200, QuadGeometry::Sb4096B512).unwrap();
        for _ in 0..2000 {
            let pos = rng.gen_range(0..=text.len());
            for k in 0..m.levels() {
                for q in 0..if k < m.quad_levels() { 4 } else { 2 } {
                    let exact = m.step(k, q, pos);
                    let coarse = m.step_block(k, q, pos);
                    assert!(coarse <= exact && exact - coarse < 512);
                }
            }
        }
    }

    #[test]
    fn encode_decode() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let text: Vec<u8> = (0..30_000).map(|_| rng.gen_range(0..100)).collect();
        let m = QuadWaveletMatrix::from_text(&text, QuadGeometry::Sb2048B256).unwrap();
        let mut buf = Vec::new();
        m.encode(&mut buf);
        let back = QuadWaveletMatrix::decode(&mut buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert!(QuadWaveletMatrix::decode(&mut &buf[..buf.len() - 3]).is_err());
        buf[0] = b'X';
        assert!(QuadWaveletMatrix::decode(&mut buf.as_slice()).is_err());
    }
}
