//! Timing loop, checksums and reports.
//!
//! Every structure first answers the whole workload once; its FNV-1a checksum over
//! the little-endian answers must equal the first structure's, otherwise the run
//! stops without reporting any timing.

use std::hash::Hasher;
use std::time::Instant;

use fnv::FnvHasher;
use serde::Serialize;

use qwt_core::{BinaryWaveletMatrix, QuadWaveletMatrix};

use crate::error::{CliError, Result};
use crate::workload::{QueryKind, Workload};

/// Environment variable holding the hardware description copied into reports.
pub const HARDWARE_ENV: &str = "QWT_HARDWARE";

pub fn hardware() -> String {
    std::env::var(HARDWARE_ENV).unwrap_or_else(|_| "unspecified".into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SpaceBreakdown {
    pub data_bits: usize,
    pub counter_bits: usize,
    pub select_sample_bits: usize,
    pub predictor_bits: usize,
    pub total_bits: usize,
}

impl SpaceBreakdown {
    pub fn of_matrix(m: &QuadWaveletMatrix) -> Self {
        let mut s = Self::default();
        for r in m.quad_space_reports() {
            s.data_bits += r.stored_data_bits;
            s.counter_bits += r.counter_bits;
            s.select_sample_bits += r.select_sample_bits;
        }
        if let Some(t) = m.tail_plane() {
            s.data_bits += t.data_bits();
            s.counter_bits += t.directory_bits();
            s.select_sample_bits += t.select_bits();
        }
        s.predictor_bits = m.predictor_size_in_bits();
        s.total_bits = s.data_bits + s.counter_bits + s.select_sample_bits + s.predictor_bits;
        s
    }

    pub fn of_binary(wm: &BinaryWaveletMatrix) -> Self {
        let mut s = Self::default();
        for k in 0..wm.levels() {
            let p = wm.plane(k);
            s.data_bits += p.data_bits();
            s.counter_bits += p.directory_bits();
            s.select_sample_bits += p.select_bits();
        }
        s.total_bits = s.data_bits + s.counter_bits + s.select_sample_bits;
        s
    }
}

/// A structure that can answer a workload.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Qwm(&'a QuadWaveletMatrix),
    /// Ranks go through the prefetching path.
    QwmPrefetch(&'a QuadWaveletMatrix),
    BinWm(&'a BinaryWaveletMatrix),
}

impl Target<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Qwm(_) => "qwm",
            Self::QwmPrefetch(_) => "qwm+prefetch",
            Self::BinWm(_) => "binwm",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Qwm(m) | Self::QwmPrefetch(m) => m.len(),
            Self::BinWm(wm) => wm.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn space(&self) -> SpaceBreakdown {
        match self {
            Self::Qwm(m) => {
                let mut s = SpaceBreakdown::of_matrix(m);
                s.total_bits -= s.predictor_bits;
                s.predictor_bits = 0;
                s
            }
            Self::QwmPrefetch(m) => SpaceBreakdown::of_matrix(m),
            Self::BinWm(wm) => SpaceBreakdown::of_binary(wm),
        }
    }

    /// Answers the workload once and returns the checksum of the answers.
    pub fn execute(&self, w: &Workload) -> Result<u64> {
        if w.len != self.len() {
            return Err(CliError::Invalid(format!(
                "workload drawn for length {} but {} has length {}",
                w.len,
                self.name(),
                self.len()
            )));
        }
        Ok(match *self {
            Self::Qwm(m) => run(w, |i| m.access(i).unwrap() as u64, |s, i| m.rank_unchecked(s, i), |s, j| {
                m.select(s, j).unwrap()
            }),
            Self::QwmPrefetch(m) => run(
                w,
                |i| m.access(i).unwrap() as u64,
                |s, i| m.rank_prefetch_unchecked(s, i),
                |s, j| m.select(s, j).unwrap(),
            ),
            Self::BinWm(wm) => run(
                w,
                |i| wm.access(i).unwrap() as u64,
                |s, i| wm.rank(s, i).unwrap(),
                |s, j| wm.select(s, j).unwrap(),
            ),
        })
    }
}

#[inline(always)]
fn run<A, R, S>(w: &Workload, access: A, rank: R, select: S) -> u64
where
    A: Fn(usize) -> u64,
    R: Fn(u32, usize) -> usize,
    S: Fn(u32, usize) -> usize,
{
    let mut hash = FnvHasher::default();
    let mut prev = 0u64;
    for q in &w.queries {
        let arg = w.argument(q, prev);
        let answer = match w.kind {
            QueryKind::Access => access(arg as usize),
            QueryKind::Rank => rank(q.symbol, arg as usize) as u64,
            QueryKind::Select => select(q.symbol, arg as usize) as u64,
        };
        hash.write(&answer.to_le_bytes());
        prev = answer;
    }
    hash.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub structure: String,
    pub kind: QueryKind,
    pub count: usize,
    pub reps: usize,
    pub chained: bool,
    pub seed: u64,
    pub n: usize,
    pub checksum: String,
    /// Total over all repetitions.
    pub wall_time_ns: u64,
    pub latency_ns: f64,
    pub throughput_qps: f64,
    pub space: SpaceBreakdown,
    pub hardware: String,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "structure,kind,count,reps,chained,seed,n,checksum,wall_time_ns,latency_ns,throughput_qps,data_bits,counter_bits,select_sample_bits,predictor_bits,total_bits,hardware";

    pub fn csv_row(&self) -> String {
        let s = &self.space;
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3},{:.1},{},{},{},{},{},\"{}\"",
            self.structure,
            self.kind.name(),
            self.count,
            self.reps,
            self.chained,
            self.seed,
            self.n,
            self.checksum,
            self.wall_time_ns,
            self.latency_ns,
            self.throughput_qps,
            s.data_bits,
            s.counter_bits,
            s.select_sample_bits,
            s.predictor_bits,
            s.total_bits,
            self.hardware.replace('"', "\"\"")
        )
    }
}

/// Times `reps` runs of every target on `w`. Targets are validated against the first
/// one before any timing starts.
pub fn run_suite(targets: &[Target<'_>], w: &Workload, reps: usize) -> Result<Vec<BenchReport>> {
    if reps == 0 {
        return Err(CliError::Invalid("repetitions must be at least 1".into()));
    }
    let Some(reference) = targets.first() else {
        return Ok(Vec::new());
    };
    let want = reference.execute(w)?;
    for t in &targets[1..] {
        let got = t.execute(w)?;
        if got != want {
            return Err(CliError::ChecksumMismatch {
                structure: t.name().into(),
                reference: reference.name().into(),
                got,
                want,
            });
        }
    }
    let hardware = hardware();
    let mut reports = Vec::with_capacity(targets.len());
    for t in targets {
        let start = Instant::now();
        for _ in 0..reps {
            let got = t.execute(w)?;
            if got != want {
                return Err(CliError::ChecksumMismatch {
                    structure: t.name().into(),
                    reference: reference.name().into(),
                    got,
                    want,
                });
            }
        }
        let elapsed = start.elapsed();
        let queries = (w.queries.len() * reps) as f64;
        reports.push(BenchReport {
            structure: t.name().into(),
            kind: w.kind,
            count: w.queries.len(),
            reps,
            chained: w.chained,
            seed: w.seed,
            n: w.len,
            checksum: format!("{want:016x}"),
            wall_time_ns: elapsed.as_nanos() as u64,
            latency_ns: elapsed.as_nanos() as f64 / queries,
            throughput_qps: queries / elapsed.as_secs_f64().max(1e-12),
            space: t.space(),
            hardware: hardware.clone(),
        });
    }
    Ok(reports)
}
