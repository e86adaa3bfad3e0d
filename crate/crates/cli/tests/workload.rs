use qwt_cli::workload::{generate, QueryKind};
use qwt_core::{QuadGeometry, QuadWaveletMatrix};

#[test]
fn select_symbols_follow_corpus_frequencies() {
    // symbol c appears with weight 2^-(c+1), the rest goes to the last symbol
    let n = 1 << 20;
    let sigma = 6;
    let text: Vec<u8> = (0..n)
        .map(|i: u32| {
            let x = i.wrapping_mul(2_654_435_761).rotate_left(7) ^ i;
            (x.trailing_ones() as u8).min(sigma - 1)
        })
        .collect();
    let m = QuadWaveletMatrix::new(&text, sigma as usize, QuadGeometry::default()).unwrap();
    let w = generate(&m, QueryKind::Select, 1_000_000, 17, false).unwrap();
    let mut seen = [0usize; 6];
    for q in &w.queries {
        seen[q.symbol as usize] += 1;
    }
    for c in 0..sigma as u32 {
        let corpus = m.rank(c, n as usize).unwrap() as f64 / n as f64;
        let workload = seen[c as usize] as f64 / w.queries.len() as f64;
        assert!((corpus - workload).abs() < 0.02, "symbol {c}: corpus {corpus} workload {workload}");
    }
}
