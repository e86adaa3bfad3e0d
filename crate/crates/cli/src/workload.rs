//! Reproducible query workloads.
//!
//! The generator is SplitMix64 (`rand_xoshiro::SplitMix64`) seeded with the user
//! seed. A value below `bound` is drawn as `(x * bound) >> 64` on the 128-bit
//! product of a raw 64-bit output `x`, so every implementation using the same
//! generator and rule produces the same workload.
//!
//! - access: a position `i` uniform in `[0, n)`;
//! - rank: `<i, S[i]>` for a uniform `i`;
//! - select: a symbol `c` drawn with probability `occ(c) / n`, then `r` uniform in
//!   `[1, occ(c)]`.
//!
//! In chained mode the argument of each query is perturbed by the previous answer:
//! positions become `(answer ^ i) mod n` and select ranks `((answer ^ (r - 1)) mod
//! occ(c)) + 1`.

use clap::ValueEnum;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use qwt_core::QuadWaveletMatrix;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum QueryKind {
    Access,
    Rank,
    Select,
}

impl QueryKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Access => "access",
            Self::Rank => "rank",
            Self::Select => "select",
        }
    }
}

/// One query. `arg` is a position (access, rank) or an occurrence number (select);
/// `occ` is the number of occurrences of `symbol` (select only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub arg: u64,
    pub symbol: u32,
    pub occ: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    pub kind: QueryKind,
    pub seed: u64,
    pub chained: bool,
    /// Length of the sequence the workload was drawn for.
    pub len: usize,
    pub queries: Vec<Query>,
}

/// Maps a raw 64-bit value to `[0, bound)`.
#[inline]
pub fn bounded(x: u64, bound: u64) -> u64 {
    ((x as u128 * bound as u128) >> 64) as u64
}

/// Draws `count` queries over the sequence stored in `m`.
pub fn generate(m: &QuadWaveletMatrix, kind: QueryKind, count: usize, seed: u64, chained: bool) -> Result<Workload> {
    let n = m.len();
    if count == 0 {
        return Err(CliError::Invalid("query count must be at least 1".into()));
    }
    if n == 0 {
        return Err(CliError::Invalid("cannot draw queries over an empty sequence".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut queries = Vec::with_capacity(count);
    match kind {
        QueryKind::Access => {
            for _ in 0..count {
                let i = bounded(rng.next_u64(), n as u64);
                queries.push(Query { arg: i, symbol: 0, occ: 0 });
            }
        }
        QueryKind::Rank => {
            for _ in 0..count {
                let i = bounded(rng.next_u64(), n as u64);
                let symbol = m.access(i as usize)?;
                queries.push(Query { arg: i, symbol, occ: 0 });
            }
        }
        QueryKind::Select => {
            // cumulative[c] = occurrences of codes below c
            let mut cumulative = Vec::with_capacity(m.sigma() + 1);
            let mut acc = 0u64;
            cumulative.push(0);
            for c in 0..m.sigma() as u32 {
                acc += m.rank_unchecked(c, n) as u64;
                cumulative.push(acc);
            }
            for _ in 0..count {
                let u = bounded(rng.next_u64(), n as u64);
                let symbol = cumulative.partition_point(|&x| x <= u) - 1;
                let occ = cumulative[symbol + 1] - cumulative[symbol];
                let r = 1 + bounded(rng.next_u64(), occ);
                queries.push(Query { arg: r, symbol: symbol as u32, occ });
            }
        }
    }
    Ok(Workload { kind, seed, chained, len: n, queries })
}

impl Workload {
    /// Argument of `q` after chaining with the previous answer.
    #[inline(always)]
    pub fn argument(&self, q: &Query, previous: u64) -> u64 {
        if !self.chained {
            return q.arg;
        }
        match self.kind {
            QueryKind::Select => (previous ^ (q.arg - 1)) % q.occ + 1,
            _ => (previous ^ q.arg) % self.len as u64,
        }
    }
}
