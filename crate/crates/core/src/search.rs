//! Pattern counting by backward search over the BWT.
//!
//! The text gets a sentinel (code 0) appended; every byte `c` is stored as code
//! `c + 1` before the dense remap, so the matrix's decode table maps codes back to
//! `byte + 1` and code 0 to the sentinel.

use alloc::vec::Vec;

use crate::codec::{self, Encode};
use crate::qwm::QuadWaveletMatrix;
use crate::quadvec::QuadGeometry;
use crate::{Error, Result};

/// Longest text accepted by [`FmCountIndex::new`].
pub const MAX_TEXT_LEN: usize = 64 << 20;

const SECTION: &[u8; 4] = b"FMCT";

/// Suffix array of `s` by prefix doubling. All suffixes must be distinct, which a
/// unique smallest final symbol guarantees.
pub fn suffix_array(s: &[u16]) -> Vec<u32> {
    let n = s.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = s.iter().map(|&c| c as u32).collect();
    let mut next = alloc::vec![0u32; n];
    let mut k = 1;
    while n > 1 {
        {
            let key = |i: u32| {
                let i = i as usize;
                let second = if i + k < n { rank[i + k] as u64 + 1 } else { 0 };
                (rank[i] as u64) << 32 | second
            };
            sa.sort_unstable_by_key(|&i| key(i));
            next[sa[0] as usize] = 0;
            for j in 1..n {
                let step = (key(sa[j]) != key(sa[j - 1])) as u32;
                next[sa[j] as usize] = next[sa[j - 1] as usize] + step;
            }
        }
        core::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// BWT of `text` followed by the sentinel, with bytes shifted to `c + 1` and the
/// sentinel written as 0.
pub fn bwt(text: &[u8]) -> Vec<u16> {
    let mut s: Vec<u16> = text.iter().map(|&c| c as u16 + 1).collect();
    s.push(0);
    let sa = suffix_array(&s);
    sa.iter()
        .map(|&p| if p == 0 { s[s.len() - 1] } else { s[p as usize - 1] })
        .collect()
}

/// Counting-only FM-index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmCountIndex {
    matrix: QuadWaveletMatrix,
    counts: Vec<usize>,
}

impl FmCountIndex {
    pub fn new(text: &[u8], geometry: QuadGeometry) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::InvalidParameter("text must not be empty"));
        }
        if text.len() > MAX_TEXT_LEN {
            return Err(Error::InvalidParameter("text longer than 64 MiB"));
        }
        let matrix = QuadWaveletMatrix::from_text(&bwt(text), geometry)?;
        let counts = Self::cumulative(&matrix);
        Ok(Self { matrix, counts })
    }

    fn cumulative(m: &QuadWaveletMatrix) -> Vec<usize> {
        let mut counts = Vec::with_capacity(m.alphabet().len() + 1);
        let mut acc = 0;
        counts.push(0);
        for c in 0..m.alphabet().len() as u32 {
            acc += m.rank_unchecked(c, m.len());
            counts.push(acc);
        }
        counts
    }

    /// Length of the BWT (text plus sentinel).
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn matrix(&self) -> &QuadWaveletMatrix {
        &self.matrix
    }

    /// Mutable access, e.g. to attach a predictor.
    pub fn matrix_mut(&mut self) -> &mut QuadWaveletMatrix {
        &mut self.matrix
    }

    /// Exclusive prefix sums of the code histogram; entry 0 is the sentinel's slot.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Dense code of byte `c`, if it occurs.
    pub fn code(&self, c: u8) -> Option<u32> {
        self.matrix.alphabet().encode(c as u32 + 1)
    }

    /// 1-based inclusive range `[s, e]` of BWT rows prefixed by `pattern`, or `None`
    /// when it does not occur.
    ///
    /// Internally the range is the half-open `[lo, hi)` with `lo = s - 1` and
    /// `hi = e`, so each step is `lo = C[c] + rank_c(lo)`, `hi = C[c] + rank_c(hi)`.
    pub fn backward_search(&self, pattern: &[u8]) -> Option<(usize, usize)> {
        self.search_with(pattern, false)
    }

    /// Same as [`Self::backward_search`] using prefetching ranks.
    pub fn backward_search_prefetch(&self, pattern: &[u8]) -> Option<(usize, usize)> {
        self.search_with(pattern, true)
    }

    fn search_with(&self, pattern: &[u8], prefetch: bool) -> Option<(usize, usize)> {
        if pattern.is_empty() {
            return None;
        }
        let mut lo = 0;
        let mut hi = self.len();
        for &c in pattern.iter().rev() {
            let code = self.code(c)?;
            let base = self.counts[code as usize];
            if prefetch {
                lo = base + self.matrix.rank_prefetch_unchecked(code, lo);
                hi = base + self.matrix.rank_prefetch_unchecked(code, hi);
            } else {
                lo = base + self.matrix.rank_unchecked(code, lo);
                hi = base + self.matrix.rank_unchecked(code, hi);
            }
            if lo >= hi {
                return None;
            }
        }
        Some((lo + 1, hi))
    }

    /// Occurrences of `pattern` in the text.
    pub fn count(&self, pattern: &[u8]) -> usize {
        self.backward_search(pattern).map_or(0, |(s, e)| e - s + 1)
    }

    pub fn decode(input: &mut &[u8]) -> Result<Self> {
        let matrix = QuadWaveletMatrix::decode(input)?;
        if input.len() < 4 || &input[..4] != SECTION {
            return Err(Error::Decode("missing count table section"));
        }
        *input = &input[4..];
        let n = codec::get_len(input, 8)?;
        let mut counts = Vec::with_capacity(n);
        for _ in 0..n {
            counts.push(codec::get_usize(input)?);
        }
        if matrix.alphabet().decode(0) != Some(0) || counts != Self::cumulative(&matrix) {
            return Err(Error::Decode("count table inconsistent with the matrix"));
        }
        Ok(Self { matrix, counts })
    }
}

/// The matrix, then `FMCT`, the number of entries and the count table (u64 each).
impl Encode for FmCountIndex {
    fn encode(&self, out: &mut Vec<u8>) {
        self.matrix.encode(out);
        out.extend_from_slice(SECTION);
        codec::put_usize(out, self.counts.len());
        for &c in &self.counts {
            codec::put_usize(out, c);
        }
    }
}
