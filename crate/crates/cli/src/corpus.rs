//! Deterministic synthetic corpora for tests and benchmarks.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::workload::bounded;

/// `len` bytes drawn uniformly from `0..sigma` (`1 <= sigma <= 256`).
pub fn uniform_bytes(len: usize, sigma: usize, seed: u64) -> Vec<u8> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let x = rng.next_u64();
        if sigma == 256 {
            let take = (len - out.len()).min(8);
            out.extend_from_slice(&x.to_le_bytes()[..take]);
        } else {
            out.push(bounded(x, sigma as u64) as u8);
        }
    }
    out
}

/// Text made of pseudo-words with Zipf-like frequencies, separated by spaces,
/// with occasional sentence and line breaks.
pub fn words(len: usize, seed: u64) -> Vec<u8> {
    const VOCABULARY: usize = 4000;
    const LETTERS: &[u8] = b"etaoinshrdlcumwfgypbvkjxqz";
    let mut rng = SplitMix64::seed_from_u64(seed);

    let vocab: Vec<Vec<u8>> = (0..VOCABULARY)
        .map(|_| {
            let n = 1 + bounded(rng.next_u64(), 9) as usize;
            // skew letters towards the front of the frequency list
            (0..n)
                .map(|_| {
                    let a = bounded(rng.next_u64(), LETTERS.len() as u64);
                    let b = bounded(rng.next_u64(), LETTERS.len() as u64);
                    LETTERS[a.min(b) as usize]
                })
                .collect()
        })
        .collect();
    let mut cumulative = Vec::with_capacity(VOCABULARY);
    let mut total = 0.0;
    for r in 0..VOCABULARY {
        total += 1.0 / (r + 1) as f64;
        cumulative.push(total);
    }

    let mut out = Vec::with_capacity(len + 16);
    while out.len() < len {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * total;
        let w = cumulative.partition_point(|&c| c <= u).min(VOCABULARY - 1);
        out.extend_from_slice(&vocab[w]);
        out.push(match bounded(rng.next_u64(), 40) {
            0 => b'.',
            1 => b'\n',
            2 => b',',
            _ => b' ',
        });
    }
    out.truncate(len);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(words(1000, 5), words(1000, 5));
        assert_ne!(words(1000, 5), words(1000, 6));
        assert_eq!(uniform_bytes(100, 256, 1).len(), 100);
        assert!(uniform_bytes(1000, 7, 1).iter().all(|&b| b < 7));
    }
}
