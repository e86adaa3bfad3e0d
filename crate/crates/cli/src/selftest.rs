//! Small oracle suites run by `qwt selftest`.

use std::io::{self, Write};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use qwt_core::predictor::{corrected_chain, Predictor};
use qwt_core::{
    Alphabet, BinaryWaveletMatrix, BinaryWaveletTree, FmCountIndex, QuadGeometry,
    QuadWaveletMatrix,
};

use crate::workload::bounded;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn running_example() -> Check {
    let text = b"accessandselect";
    let a = Alphabet::from_text(text).map_err(|e| e.to_string())?;
    let codes = a.encode_text(text).map_err(|e| e.to_string())?;
    let wm = BinaryWaveletMatrix::new(&codes, 8).map_err(|e| e.to_string())?;
    ensure(wm.zeros() == [9, 7, 7], || format!("zeros {:?}", wm.zeros()))?;
    let m = QuadWaveletMatrix::new(&codes, 8, QuadGeometry::default()).map_err(|e| e.to_string())?;
    ensure(m.level_order_ends(0) == [5, 7, 11, 15], || format!("ends {:?}", m.level_order_ends(0)))?;
    ensure(m.tail_zeros() == 7, || format!("tail zeros {}", m.tail_zeros()))
}

fn random_oracle() -> Check {
    let mut rng = SplitMix64::seed_from_u64(7);
    for (t, &sigma) in [2usize, 3, 4, 5, 16, 17, 64, 256, 257].iter().cycle().take(60).enumerate() {
        let n = bounded(rng.next_u64(), 1500) as usize;
        let text: Vec<u16> = (0..n).map(|_| bounded(rng.next_u64(), sigma as u64) as u16).collect();
        let g = if t % 2 == 0 { QuadGeometry::Sb4096B512 } else { QuadGeometry::Sb2048B256 };
        let m = QuadWaveletMatrix::new(&text, sigma, g).map_err(|e| e.to_string())?;
        let wm = BinaryWaveletMatrix::new(&text, sigma).map_err(|e| e.to_string())?;
        let wt = BinaryWaveletTree::new(&text, sigma).map_err(|e| e.to_string())?;
        let mut counts = vec![0usize; sigma];
        for i in 0..=n {
            for _ in 0..4 {
                let s = bounded(rng.next_u64(), sigma as u64) as u32;
                let want = counts[s as usize];
                let got = [m.rank(s, i), wm.rank(s, i), wt.rank(s, i)];
                ensure(got.iter().all(|g| *g == Ok(want)), || format!("rank({s}, {i}) sigma {sigma}: {got:?} vs {want}"))?;
            }
            if i < n {
                let c = text[i] as u32;
                ensure(m.access(i) == Ok(c), || format!("access({i})"))?;
                counts[c as usize] += 1;
                ensure(m.select(c, counts[c as usize]) == Ok(i + 1), || format!("select({c}, {})", counts[c as usize]))?;
            }
        }
    }
    Ok(())
}

fn predictor_bounds() -> Check {
    let mut rng = SplitMix64::seed_from_u64(11);
    let text: Vec<u8> = (0..200_000).map(|_| bounded(rng.next_u64(), 256) as u8).collect();
    let m = QuadWaveletMatrix::new(&text, 256, QuadGeometry::default()).map_err(|e| e.to_string())?;
    let eps = 64;
    let p = Predictor::corrected(&m, eps).map_err(|e| e.to_string())?;
    for _ in 0..5000 {
        let i = bounded(rng.next_u64(), m.len() as u64 + 1) as usize;
        let s = bounded(rng.next_u64(), 256) as u32;
        let exact = m.exact_chain(s, i);
        let est = corrected_chain(&m, &p, s, i).map_err(|e| e.to_string())?;
        for (k, (x, y)) in exact.iter().zip(&est).enumerate() {
            ensure(y <= x && x - y < eps, || format!("level {k}: exact {x} estimate {y}"))?;
        }
    }
    Ok(())
}

fn prefetch_transparency() -> Check {
    let mut rng = SplitMix64::seed_from_u64(12);
    let text: Vec<u8> = (0..300_000).map(|_| bounded(rng.next_u64(), 200) as u8).collect();
    let mut m = QuadWaveletMatrix::new(&text, 200, QuadGeometry::Sb2048B256).map_err(|e| e.to_string())?;
    m.build_predictor(2048).map_err(|e| e.to_string())?;
    for _ in 0..20_000 {
        let i = bounded(rng.next_u64(), m.len() as u64 + 1) as usize;
        let s = bounded(rng.next_u64(), 200) as u32;
        ensure(m.rank_prefetch(s, i) == m.rank(s, i), || format!("rank({s}, {i})"))?;
    }
    Ok(())
}

fn backward_search() -> Check {
    let text = crate::corpus::words(100_000, 3);
    let ix = FmCountIndex::new(&text, QuadGeometry::default()).map_err(|e| e.to_string())?;
    let mut rng = SplitMix64::seed_from_u64(13);
    for _ in 0..50 {
        let len = 1 + bounded(rng.next_u64(), 8) as usize;
        let start = bounded(rng.next_u64(), (text.len() - len) as u64) as usize;
        let p = &text[start..start + len];
        let naive = text.windows(len).filter(|w| *w == p).count();
        ensure(ix.count(p) == naive, || format!("pattern {:?}", String::from_utf8_lossy(p)))?;
    }
    ensure(ix.count(b"banana!") == 0, || "absent pattern".into())
}

/// Runs every suite, printing one line each. Returns whether all passed.
pub fn run(out: &mut dyn Write) -> io::Result<bool> {
    let suites: [(&str, fn() -> Check); 5] = [
        ("running example", running_example),
        ("random texts vs scan", random_oracle),
        ("corrected predictor chain", predictor_bounds),
        ("prefetch transparency", prefetch_transparency),
        ("backward search", backward_search),
    ];
    let mut ok = true;
    for (name, f) in suites {
        match f() {
            Ok(()) => writeln!(out, "selftest {name} ... ok")?,
            Err(e) => {
                ok = false;
                writeln!(out, "selftest {name} ... FAILED: {e}")?;
            }
        }
    }
    Ok(ok)
}
