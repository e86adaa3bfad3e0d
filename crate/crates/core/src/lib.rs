//! Succinct sequences over small alphabets built around 4-ary wavelet matrices.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`RsBitVector`]: a plain bit vector with constant-time rank and sampled select;
//! - [`RsQuadVector`]: a vector over `{0, 1, 2, 3}` with interleaved per-symbol
//!   superblock/block counters in either a 4096/512 or a 2048/256 geometry;
//! - [`BinaryWaveletMatrix`] and [`BinaryWaveletTree`]: binary baselines;
//! - [`QuadWaveletMatrix`]: the 4-ary wavelet matrix with access, rank, select and
//!   prefetch-accelerated rank;
//! - [`predictor`]: additive-approximation rank structures used to predict the cache
//!   lines a rank query is going to touch;
//! - [`search`]: backward-search pattern counting over the BWT.
//!
//! Positions are 0-based. `rank(i)` counts occurrences strictly before `i` and
//! `select(j)` returns the smallest `p` with `rank(p) == j`, i.e. one past the
//! position of the `j`-th occurrence.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod alphabet;
pub mod binwm;
pub mod bitvec;
mod broadword;
pub mod codec;
mod error;
pub mod predictor;
pub mod prefetch;
pub mod quadvec;
pub mod qwm;
pub mod search;

pub use alphabet::Alphabet;
pub use binwm::{BinaryWaveletMatrix, BinaryWaveletTree};
pub use bitvec::{BitGeometry, RsBitVector};
pub use error::{Error, Result};
pub use predictor::{ApproxRankIndex, DiscriminantTable, PrefetchPlan, Predictor};
pub use quadvec::{QuadGeometry, RsQuadVector, SpaceReport};
pub use qwm::QuadWaveletMatrix;
pub use search::FmCountIndex;

/// Number of occurrences between two select samples.
pub const SELECT_SAMPLE_RATE: usize = 8192;

/// Cache line size in bytes assumed by the layouts and the prefetch planner.
pub const CACHE_LINE_BYTES: usize = 64;
