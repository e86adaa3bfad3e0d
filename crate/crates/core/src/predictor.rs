//! Rank with additive approximation and the prefetch planner built on it.
//!
//! [`ApproxRankIndex`] splits a level into blocks of `h = epsilon / 2` positions and,
//! for every symbol, marks block `p / h` whenever the symbol's running count reaches
//! a multiple of `h` at position `p`. The number of marked blocks strictly before
//! block `i / h`, times `h`, is a lower bound of the exact rank short by at most
//! `epsilon - 2`.
//!
//! Chaining such estimates through the levels lets the errors add up. The optional
//! [`DiscriminantTable`] stores where, inside its block, each marked occurrence is;
//! from the successor `d` of the previous estimate `x` the next estimate becomes
//! `rank(d) - min(d - x, epsilon - 1)`, which keeps every level within
//! `[0, epsilon - 1]` of the exact chain.
//!
//! The practical planner skips the correction. It predicts counter lines from a
//! coarse chain (blocks of 2048 positions by default), then reads the counters
//! along a second chain and predicts data lines from block counts, widening the
//! windows by one block per level.

use alloc::vec::Vec;
use arrayvec::ArrayVec;

use crate::bitvec::{BitGeometry, RsBitVector};
use crate::codec::{self, Encode};
use crate::qwm::{Level, QuadWaveletMatrix, MAX_LEVELS};
use crate::{Error, Result};

/// Block length of the practical predictor, in positions.
pub const DEFAULT_BLOCK: usize = 2048;

/// Default bound on the number of cache lines a plan may name.
pub const DEFAULT_MAX_LINES: usize = 10;

/// Positions of the marked occurrences inside their blocks, aligned with the set
/// bits of the corresponding bitmap.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscriminantTable {
    offsets: Vec<Vec<u16>>,
}

impl DiscriminantTable {
    /// Offset within its block of the `m`-th (0-based) marked occurrence of `symbol`.
    pub fn offset(&self, symbol: u8, m: usize) -> usize {
        self.offsets[symbol as usize][m] as usize
    }

    pub fn len(&self, symbol: u8) -> usize {
        self.offsets[symbol as usize].len()
    }

    pub fn size_in_bits(&self) -> usize {
        self.offsets.iter().map(|o| o.len() * 16).sum()
    }
}

/// Additive-approximation rank over one level with 2 or 4 symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRankIndex {
    epsilon: usize,
    len: usize,
    bitmaps: Vec<RsBitVector>,
    totals: Vec<usize>,
    discriminants: Option<DiscriminantTable>,
}

fn check_epsilon(epsilon: usize) -> Result<()> {
    if epsilon < 2 || epsilon % 2 != 0 {
        return Err(Error::InvalidParameter("epsilon must be even and at least 2"));
    }
    if epsilon / 2 > 1 << 16 {
        return Err(Error::InvalidParameter("epsilon must be at most 2^17"));
    }
    Ok(())
}

impl ApproxRankIndex {
    /// Builds over a sequence of `len` symbols in `0..arity` read through `get`.
    pub fn from_fn<F: Fn(usize) -> u8>(
        len: usize,
        arity: usize,
        epsilon: usize,
        discriminants: bool,
        get: F,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !(2..=4).contains(&arity) {
            return Err(Error::InvalidParameter("arity must be between 2 and 4"));
        }
        let h = epsilon / 2;
        let blocks = len.div_ceil(h);
        let mut words: Vec<Vec<u64>> = (0..arity).map(|_| alloc::vec![0u64; blocks.div_ceil(64)]).collect();
        let mut offsets: Vec<Vec<u16>> = (0..arity).map(|_| Vec::new()).collect();
        let mut counts = alloc::vec![0usize; arity];
        for p in 0..len {
            let s = get(p) as usize;
            counts[s] += 1;
            if counts[s] % h == 0 {
                let b = p / h;
                words[s][b / 64] |= 1 << (b % 64);
                if discriminants {
                    offsets[s].push((p % h) as u16);
                }
            }
        }
        let bitmaps = words
            .into_iter()
            .map(|w| RsBitVector::from_words(w, blocks, BitGeometry::Sb512B64))
            .collect();
        Ok(Self {
            epsilon,
            len,
            bitmaps,
            totals: counts,
            discriminants: discriminants.then_some(DiscriminantTable { offsets }),
        })
    }

    pub fn from_quads(qv: &crate::RsQuadVector, epsilon: usize, discriminants: bool) -> Result<Self> {
        Self::from_fn(qv.len(), 4, epsilon, discriminants, |i| qv.get_unchecked(i))
    }

    pub fn from_bits(bv: &RsBitVector, epsilon: usize, discriminants: bool) -> Result<Self> {
        Self::from_fn(bv.len(), 2, epsilon, discriminants, |i| bv.get_unchecked(i) as u8)
    }

    pub fn epsilon(&self) -> usize {
        self.epsilon
    }

    /// Positions per block, `epsilon / 2`.
    #[inline(always)]
    pub fn block_len(&self) -> usize {
        self.epsilon / 2
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn arity(&self) -> usize {
        self.bitmaps.len()
    }

    pub fn bitmap(&self, symbol: u8) -> &RsBitVector {
        &self.bitmaps[symbol as usize]
    }

    pub fn discriminants(&self) -> Option<&DiscriminantTable> {
        self.discriminants.as_ref()
    }

    /// Lower bound `r~` of `rank(symbol, i)` with `rank - r~ <= epsilon - 2`.
    pub fn rank_approx(&self, symbol: u8, i: usize) -> Result<usize> {
        if symbol as usize >= self.arity() {
            return Err(Error::InvalidSymbol { symbol: symbol as u32, sigma: self.arity() as u32 });
        }
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.rank_approx_unchecked(symbol, i))
    }

    #[inline(always)]
    pub fn rank_approx_unchecked(&self, symbol: u8, i: usize) -> usize {
        let h = self.block_len();
        self.bitmaps[symbol as usize].rank1_unchecked(i / h) * h
    }

    /// First discriminant position `d >= x` of `symbol` with its exact rank, or
    /// `(len, total)` when there is none. Requires discriminants and `x <= len`.
    pub fn successor(&self, symbol: u8, x: usize) -> (usize, usize) {
        let d = self.discriminants.as_ref().expect("built without discriminants");
        let s = symbol as usize;
        let h = self.block_len();
        let bv = &self.bitmaps[s];
        let b = x / h;
        let mut m = bv.rank1_unchecked(b.min(bv.len()));
        if b < bv.len() && bv.get_unchecked(b) {
            let pos = b * h + d.offsets[s][m] as usize;
            if pos >= x {
                return (pos, (m + 1) * h - 1);
            }
            m += 1;
        }
        if m < bv.count_ones() {
            let block = bv.select1_unchecked(m + 1) - 1;
            (block * h + d.offsets[s][m] as usize, (m + 1) * h - 1)
        } else {
            (self.len, self.totals[s])
        }
    }

    /// Estimate of `rank(symbol, y)` for an unknown `y` in `[x, x + epsilon - 1]`,
    /// never above it and short by at most `epsilon - 1`.
    pub fn corrected_rank(&self, symbol: u8, x: usize) -> usize {
        let (d, rank_d) = self.successor(symbol, x);
        rank_d.saturating_sub((d - x).min(self.epsilon - 1))
    }

    pub fn size_in_bits(&self) -> usize {
        self.bitmaps.iter().map(|b| b.size_in_bits()).sum::<usize>()
            + self.discriminants.as_ref().map_or(0, |d| d.size_in_bits())
    }

    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let epsilon = codec::get_usize(input)?;
        check_epsilon(epsilon).map_err(|_| Error::Decode("bad epsilon"))?;
        let arity = codec::get_u8(input)? as usize;
        if !(2..=4).contains(&arity) {
            return Err(Error::Decode("bad arity"));
        }
        let len = codec::get_usize(input)?;
        let h = epsilon / 2;
        let mut totals = Vec::with_capacity(arity);
        let mut bitmaps = Vec::with_capacity(arity);
        for _ in 0..arity {
            totals.push(codec::get_usize(input)?);
            let bv = RsBitVector::decode(input, BitGeometry::Sb512B64)?;
            if bv.len() != len.div_ceil(h) {
                return Err(Error::Decode("bitmap length does not match"));
            }
            bitmaps.push(bv);
        }
        if totals.iter().sum::<usize>() != len
            || bitmaps.iter().zip(&totals).any(|(b, &t)| b.count_ones() != t / h)
        {
            return Err(Error::Decode("bitmap counts do not match totals"));
        }
        let discriminants = match codec::get_u8(input)? {
            0 => None,
            1 => {
                let mut offsets = Vec::with_capacity(arity);
                for bv in &bitmaps {
                    let n = codec::get_len(input, 2)?;
                    if n != bv.count_ones() {
                        return Err(Error::Decode("discriminant count mismatch"));
                    }
                    let mut o = Vec::with_capacity(n);
                    for _ in 0..n {
                        let x = codec::get_u16(input)?;
                        if x as usize >= h {
                            return Err(Error::Decode("discriminant offset out of block"));
                        }
                        o.push(x);
                    }
                    offsets.push(o);
                }
                Some(DiscriminantTable { offsets })
            }
            _ => return Err(Error::Decode("bad discriminant flag")),
        };
        Ok(Self { epsilon, len, bitmaps, totals, discriminants })
    }
}

/// Epsilon, arity, length, then per symbol its total and bitmap, then an optional
/// list of discriminant offsets per symbol.
impl Encode for ApproxRankIndex {
    fn encode(&self, out: &mut Vec<u8>) {
        codec::put_usize(out, self.epsilon);
        codec::put_u8(out, self.arity() as u8);
        codec::put_usize(out, self.len);
        for (bv, &t) in self.bitmaps.iter().zip(&self.totals) {
            codec::put_usize(out, t);
            bv.encode(out);
        }
        match &self.discriminants {
            None => codec::put_u8(out, 0),
            Some(d) => {
                codec::put_u8(out, 1);
                for o in &d.offsets {
                    codec::put_usize(out, o.len());
                    for &x in o {
                        codec::put_u16(out, x);
                    }
                }
            }
        }
    }
}

/// One [`ApproxRankIndex`] per level of a [`QuadWaveletMatrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predictor {
    levels: Vec<ApproxRankIndex>,
}

impl Predictor {
    /// Builds every level with the given `epsilon` (blocks of `epsilon / 2`).
    pub fn build(m: &QuadWaveletMatrix, epsilon: usize, discriminants: bool) -> Result<Self> {
        check_epsilon(epsilon)?;
        let levels = (0..m.levels())
            .map(|k| match m.level(k) {
                Level::Quad(qv) => ApproxRankIndex::from_quads(qv, epsilon, discriminants),
                Level::Bit(bv) => ApproxRankIndex::from_bits(bv, epsilon, discriminants),
            })
            .collect::<Result<_>>()?;
        Ok(Self { levels })
    }

    /// Predictor of the practical planner: marked blocks of `block` positions, no
    /// discriminants. `block = 2048` costs `5 * levels * n / 2048` bits (4 bitmaps of
    /// `n / 2048` bits plus their directories).
    pub fn practical(m: &QuadWaveletMatrix, block: usize) -> Result<Self> {
        Self::build(m, block.checked_mul(2).ok_or(Error::InvalidParameter("block too large"))?, false)
    }

    /// Predictor with discriminant tables, enabling [`corrected_chain`].
    pub fn corrected(m: &QuadWaveletMatrix, epsilon: usize) -> Result<Self> {
        Self::build(m, epsilon, true)
    }

    pub fn epsilon(&self) -> usize {
        self.levels.first().map_or(0, |l| l.epsilon())
    }

    pub fn block_len(&self) -> usize {
        self.epsilon() / 2
    }

    pub fn has_discriminants(&self) -> bool {
        self.levels.iter().all(|l| l.discriminants.is_some())
    }

    pub fn level(&self, k: usize) -> &ApproxRankIndex {
        &self.levels[k]
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn size_in_bits(&self) -> usize {
        self.levels.iter().map(|l| l.size_in_bits()).sum()
    }

    pub(crate) fn check_matches(&self, m: &QuadWaveletMatrix) -> Result<()> {
        let ok = self.levels.len() == m.levels()
            && self.levels.iter().enumerate().all(|(k, l)| {
                l.len == m.len()
                    && l.arity() == if k < m.quad_levels() { 4 } else { 2 }
                    && l.epsilon == self.epsilon()
            });
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("predictor does not match the matrix"))
        }
    }

    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let n = codec::get_u8(input)? as usize;
        if n > MAX_LEVELS {
            return Err(Error::Decode("too many predictor levels"));
        }
        let levels = (0..n).map(|_| ApproxRankIndex::decode(input)).collect::<Result<_>>()?;
        Ok(Self { levels })
    }
}

/// Number of levels followed by each level's index.
impl Encode for Predictor {
    fn encode(&self, out: &mut Vec<u8>) {
        codec::put_u8(out, self.levels.len() as u8);
        for l in &self.levels {
            l.encode(out);
        }
    }
}

fn check_chain(m: &QuadWaveletMatrix, p: &Predictor, symbol: u32, start: usize) -> Result<()> {
    p.check_matches(m)?;
    if symbol as usize >= m.sigma() {
        return Err(Error::InvalidSymbol { symbol, sigma: m.sigma() as u32 });
    }
    if start > m.len() {
        return Err(Error::OutOfRange { index: start, len: m.len() });
    }
    Ok(())
}

/// Estimates of the positions reached after every level, chaining plain approximate
/// ranks: `x_{k+1} = C_k + r~_k(x_k)`. Errors accumulate level by level.
pub fn uncorrected_chain(
    m: &QuadWaveletMatrix,
    p: &Predictor,
    symbol: u32,
    start: usize,
) -> Result<ArrayVec<usize, MAX_LEVELS>> {
    check_chain(m, p, symbol, start)?;
    let mut out = ArrayVec::new();
    let mut x = start;
    for k in 0..m.levels() {
        let q = m.level_symbol(symbol, k);
        x = m.offset_of(k, q) + p.levels[k].rank_approx_unchecked(q, x);
        out.push(x);
    }
    Ok(out)
}

/// Estimates of the positions reached after every level using the discriminant
/// correction; each is at most `epsilon - 1` below the exact chain value.
pub fn corrected_chain(
    m: &QuadWaveletMatrix,
    p: &Predictor,
    symbol: u32,
    start: usize,
) -> Result<ArrayVec<usize, MAX_LEVELS>> {
    check_chain(m, p, symbol, start)?;
    if !p.has_discriminants() {
        return Err(Error::InvalidParameter("predictor has no discriminant tables"));
    }
    let mut out = ArrayVec::new();
    let mut x = start;
    for k in 0..m.levels() {
        let q = m.level_symbol(symbol, k);
        x = m.offset_of(k, q) + p.levels[k].corrected_rank(q, x);
        out.push(x);
    }
    Ok(out)
}

/// The two ends of a rank query followed through the levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    /// Starts at `i`.
    R,
    /// Starts at 0.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Counters,
    Data,
}

/// A run of consecutive cache lines of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanEntry {
    pub level: u8,
    pub chain: Chain,
    pub kind: LineKind,
    pub first_line: usize,
    pub lines: usize,
}

impl PlanEntry {
    pub fn contains(&self, line: usize) -> bool {
        line >= self.first_line && line - self.first_line < self.lines
    }
}

/// How windows are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlanMode {
    /// Coarse chain for counter lines, block-count chain for data lines.
    #[default]
    Practical,
    /// Both from the discriminant-corrected chain, `epsilon` positions per window.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannerConfig {
    /// Total lines a plan may name; `usize::MAX` for no limit.
    pub max_lines: usize,
    pub mode: PlanMode,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { max_lines: DEFAULT_MAX_LINES, mode: PlanMode::Practical }
    }
}

impl PlannerConfig {
    pub fn unlimited() -> Self {
        Self { max_lines: usize::MAX, ..Self::default() }
    }
}

/// Predicted cache lines of one rank query: at most one window per level, chain and
/// kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefetchPlan {
    entries: ArrayVec<PlanEntry, { 4 * MAX_LEVELS }>,
}

impl PrefetchPlan {
    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_lines(&self) -> usize {
        self.entries.iter().map(|e| e.lines).sum()
    }

    pub fn window(&self, level: usize, chain: Chain, kind: LineKind) -> Option<&PlanEntry> {
        self.entries
            .iter()
            .find(|e| e.level as usize == level && e.chain == chain && e.kind == kind)
    }

    pub fn contains(&self, level: usize, chain: Chain, kind: LineKind, line: usize) -> bool {
        self.window(level, chain, kind).is_some_and(|e| e.contains(line))
    }
}

/// A window before the line budget is applied.
#[derive(Clone, Copy)]
struct Wanted {
    first: usize,
    lines: usize,
}

fn lines_covering(m: &QuadWaveletMatrix, k: usize, from: usize, to: usize, kind: LineKind) -> Wanted {
    let to = to.min(m.len());
    let from = from.min(to);
    let (first, last) = match kind {
        LineKind::Counters => (m.counter_line(k, from), m.counter_line(k, to)),
        LineKind::Data => (m.data_line(k, m.block_start(k, from)), m.data_line(k, to)),
    };
    Wanted { first, lines: last - first + 1 }
}

/// Receives the windows of a plan once the budget is applied.
pub(crate) trait LineSink {
    fn window(&mut self, m: &QuadWaveletMatrix, entry: PlanEntry);
}

impl LineSink for PrefetchPlan {
    fn window(&mut self, _: &QuadWaveletMatrix, entry: PlanEntry) {
        self.entries.push(entry);
    }
}

/// Prefetches every window as soon as it is granted.
pub(crate) struct Issue;

impl LineSink for Issue {
    #[inline(always)]
    fn window(&mut self, m: &QuadWaveletMatrix, e: PlanEntry) {
        for line in e.first_line..e.first_line + e.lines {
            match e.kind {
                LineKind::Counters => m.prefetch_counter_line(e.level as usize, line),
                LineKind::Data => m.prefetch_data_line(e.level as usize, line),
            }
        }
    }
}

/// Grants the windows in `wanted` (indexed `[level][chain]`) within `budget` lines:
/// one line per window in level order, then the spare lines widen windows in the
/// same order. Returns the lines used.
#[inline(always)]
fn allocate<S: LineSink>(
    m: &QuadWaveletMatrix,
    wanted: &[[Wanted; 2]],
    kind: LineKind,
    budget: usize,
    sink: &mut S,
) -> usize {
    let granted = (2 * wanted.len()).min(budget);
    let mut spare = budget - granted;
    for e in 0..granted {
        let w = wanted[e / 2][e % 2];
        let extra = (w.lines - 1).min(spare);
        spare -= extra;
        let chain = if e % 2 == 0 { Chain::R } else { Chain::B };
        sink.window(m, PlanEntry { level: (e / 2) as u8, chain, kind, first_line: w.first, lines: 1 + extra });
    }
    budget - spare
}

/// Plans a rank of `symbol` at `i` against the predictor attached to `m`. The caller
/// checks `symbol` and `i`; counter windows reach `sink` before the data phase
/// reads any counter.
#[inline(always)]
pub(crate) fn plan_into<S: LineSink>(
    m: &QuadWaveletMatrix,
    p: &Predictor,
    symbol: u32,
    i: usize,
    config: &PlannerConfig,
    sink: &mut S,
) -> Result<()> {
    let levels = m.levels();
    let budget = config.max_lines;
    let counter_budget = budget - budget / 2;
    let mut counters = [[Wanted { first: 0, lines: 0 }; 2]; MAX_LEVELS];
    let mut data = counters;

    match config.mode {
        PlanMode::Practical => {
            let h = p.block_len();
            let mut x = [i, 0];
            for (k, w) in counters[..levels].iter_mut().enumerate() {
                let q = m.level_symbol(symbol, k);
                for c in 0..2 {
                    // the estimate is low by less than 2h per level crossed
                    let slack = k * (2 * h - 1);
                    w[c] = lines_covering(m, k, x[c], x[c] + slack, LineKind::Counters);
                    w[c].lines = w[c].lines.min(k + 1);
                    x[c] = m.offset_of(k, q) + p.levels[k].rank_approx_unchecked(q, x[c]);
                }
            }
            let used = allocate(m, &counters[..levels], LineKind::Counters, counter_budget, sink);

            let b = m.block_len();
            let mut f = [i, 0];
            for (k, w) in data[..levels].iter_mut().enumerate() {
                let q = m.level_symbol(symbol, k);
                for c in 0..2 {
                    w[c] = lines_covering(m, k, f[c], f[c] + k * (b - 1), LineKind::Data);
                    f[c] = m.step_block(k, q, f[c]);
                }
            }
            allocate(m, &data[..levels], LineKind::Data, budget - used, sink);
        }
        PlanMode::Corrected => {
            if !p.has_discriminants() {
                return Err(Error::InvalidParameter("predictor has no discriminant tables"));
            }
            let eps = p.epsilon();
            let mut x = [i, 0];
            for k in 0..levels {
                let q = m.level_symbol(symbol, k);
                for c in 0..2 {
                    let slack = if k == 0 { 0 } else { eps - 1 };
                    counters[k][c] = lines_covering(m, k, x[c], x[c] + slack, LineKind::Counters);
                    data[k][c] = lines_covering(m, k, x[c], x[c] + slack, LineKind::Data);
                    x[c] = m.offset_of(k, q) + p.levels[k].corrected_rank(q, x[c]);
                }
            }
            let used = allocate(m, &counters[..levels], LineKind::Counters, counter_budget, sink);
            allocate(m, &data[..levels], LineKind::Data, budget - used, sink);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadvec::{QuadGeometry, RsQuadVector};
    use alloc::vec;
    use rand::{Rng, SeedableRng};

    const FIG2: [u8; 15] = [0, 0, 0, 1, 3, 3, 0, 2, 1, 3, 1, 2, 1, 0, 3];

    #[test]
    fn running_example_marks() {
        let qv = RsQuadVector::new(&FIG2, QuadGeometry::default()).unwrap();
        let a = ApproxRankIndex::from_quads(&qv, 4, true).unwrap();
        let b0: Vec<bool> = a.bitmap(0).iter().collect();
        assert_eq!(b0, [true, false, false, true, false, false, false, false]);
        assert_eq!(a.discriminants().unwrap().offset(0, 0), 1);
        assert_eq!(a.discriminants().unwrap().offset(0, 1), 0);
        // two marked blocks before block 4
        assert_eq!(a.rank_approx(0, 8), Ok(4));
        assert_eq!(a.rank_approx(0, 0), Ok(0));
        assert_eq!(a.rank_approx(3, 15), Ok(2));
        assert!(a.rank_approx(0, 16).is_err());
    }

    #[test]
    fn empty_and_bad_epsilon() {
        let qv = RsQuadVector::new(&[], QuadGeometry::default()).unwrap();
        let a = ApproxRankIndex::from_quads(&qv, 16, false).unwrap();
        for s in 0..4 {
            assert_eq!(a.bitmap(s).len(), 0);
            assert_eq!(a.rank_approx(s, 0), Ok(0));
        }
        assert!(ApproxRankIndex::from_quads(&qv, 3, false).is_err());
        assert!(ApproxRankIndex::from_quads(&qv, 0, false).is_err());
    }

    #[test]
    fn error_is_bounded() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let quads: Vec<u8> = (0..100_000).map(|_| rng.gen_range(0..4)).collect();
        let qv = RsQuadVector::new(&quads, QuadGeometry::default()).unwrap();
        for eps in [2, 4, 16, 256] {
            let a = ApproxRankIndex::from_quads(&qv, eps, true).unwrap();
            for s in 0..4u8 {
                assert_eq!(a.bitmap(s).count_ones(), qv.occurrences(s) / (eps / 2));
            }
            for _ in 0..5000 {
                let s = rng.gen_range(0..4);
                let i = rng.gen_range(0..=quads.len());
                let r = qv.rank_unchecked(s, i);
                let est = a.rank_approx_unchecked(s, i);
                assert!(est <= r && r - est <= eps - 2, "eps {eps} r {r} est {est}");
                for y in [i, (i + eps - 1).min(quads.len())] {
                    let c = a.corrected_rank(s, i);
                    let ry = qv.rank_unchecked(s, y);
                    assert!(c <= ry && ry - c < eps);
                }
            }
        }
    }

    #[test]
    fn successor_matches_scan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(6);
        let quads: Vec<u8> = (0..3000).map(|_| if rng.gen_bool(0.7) { 0 } else { 1 }).collect();
        let qv = RsQuadVector::new(&quads, QuadGeometry::default()).unwrap();
        let a = ApproxRankIndex::from_quads(&qv, 8, true).unwrap();
        let mut marks = vec![];
        let mut seen = 0;
        for (p, &q) in quads.iter().enumerate() {
            if q == 0 {
                seen += 1;
                if seen % 4 == 0 {
                    marks.push(p);
                }
            }
        }
        for x in 0..=quads.len() {
            let want = match marks.iter().position(|&d| d >= x) {
                Some(m) => (marks[m], (m + 1) * 4 - 1),
                None => (quads.len(), qv.occurrences(0)),
            };
            assert_eq!(a.successor(0, x), want);
        }
    }

    #[test]
    fn encode_decode() {
        let quads: Vec<u8> = (0..5000u32).map(|i| (i * i % 7 % 4) as u8).collect();
        let qv = RsQuadVector::new(&quads, QuadGeometry::default()).unwrap();
        for disc in [false, true] {
            let a = ApproxRankIndex::from_quads(&qv, 64, disc).unwrap();
            let mut buf = Vec::new();
            a.encode(&mut buf);
            assert_eq!(ApproxRankIndex::decode(&mut buf.as_slice()).unwrap(), a);
            assert!(ApproxRankIndex::decode(&mut &buf[..buf.len() - 1]).is_err());
        }
    }

    #[test]
    fn single_level_plan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let text: Vec<u8> = (0..50_000).map(|_| rng.gen_range(0..4)).collect();
        let mut m = QuadWaveletMatrix::new(&text, 4, QuadGeometry::Sb2048B256).unwrap();
        m.build_predictor(DEFAULT_BLOCK).unwrap();
        let plan = m.plan_prefetch(2, 30_000, &PlannerConfig::default()).unwrap();
        for chain in [Chain::R, Chain::B] {
            assert_eq!(plan.window(0, chain, LineKind::Counters).unwrap().lines, 1);
            assert!(plan.window(0, chain, LineKind::Data).unwrap().lines <= 2);
        }
        assert!(plan.contains(0, Chain::R, LineKind::Data, 30_000 / 256));
        assert!(plan.contains(0, Chain::R, LineKind::Counters, 30_000 / 2048));
    }

    #[test]
    fn plan_respects_cap() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let text: Vec<u16> = (0..100_000).map(|_| rng.gen_range(0..256)).collect();
        let mut m = QuadWaveletMatrix::new(&text, 256, QuadGeometry::Sb4096B512).unwrap();
        m.build_predictor(DEFAULT_BLOCK).unwrap();
        for cap in [0, 1, 5, 10, 17] {
            let cfg = PlannerConfig { max_lines: cap, ..Default::default() };
            for _ in 0..200 {
                let s = rng.gen_range(0..256);
                let i = rng.gen_range(0..=text.len());
                let plan = m.plan_prefetch(s, i, &cfg).unwrap();
                assert!(plan.total_lines() <= cap);
                assert!(plan.len() <= 4 * m.levels());
                assert_eq!(m.rank_prefetch(s, i), m.rank(s, i));
            }
        }
    }
}
