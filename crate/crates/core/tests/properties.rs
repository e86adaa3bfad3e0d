use proptest::prelude::*;

use qwt_core::codec::Encode;
use qwt_core::predictor::{corrected_chain, ApproxRankIndex, Predictor};
use qwt_core::{
    BinaryWaveletMatrix, BinaryWaveletTree, BitGeometry, FmCountIndex, QuadGeometry,
    QuadWaveletMatrix, RsBitVector, RsQuadVector,
};

fn geometry() -> impl Strategy<Value = QuadGeometry> {
    prop_oneof![Just(QuadGeometry::Sb4096B512), Just(QuadGeometry::Sb2048B256)]
}

fn text_and_sigma() -> impl Strategy<Value = (Vec<u16>, usize)> {
    (2usize..600).prop_flat_map(|sigma| {
        (proptest::collection::vec(0..sigma as u16, 0..1500), Just(sigma))
    })
}

fn scan_rank(text: &[u16], s: u32, i: usize) -> usize {
    text[..i].iter().filter(|&&c| c as u32 == s).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bitvec_rank_select_laws(bits in proptest::collection::vec(any::<bool>(), 0..5000), dense in any::<bool>()) {
        let g = if dense { BitGeometry::Sb512B64 } else { BitGeometry::Sb4096B512 };
        let bv = RsBitVector::from_bits_with(bits.iter().copied(), g);
        let mut ones = 0;
        for i in 0..=bits.len() {
            prop_assert_eq!(bv.rank1(i).unwrap(), ones);
            prop_assert_eq!(bv.rank1(i).unwrap() + bv.rank0(i).unwrap(), i);
            if i < bits.len() {
                ones += bits[i] as usize;
            }
        }
        for j in 1..=bv.count_ones() {
            let p = bv.select1(j).unwrap();
            prop_assert_eq!(bv.rank1(p).unwrap(), j);
            prop_assert!(bv.get(p - 1).unwrap());
        }
        for j in 1..=bv.count_zeros() {
            let p = bv.select0(j).unwrap();
            prop_assert_eq!(bv.rank0(p).unwrap(), j);
            prop_assert!(!bv.get(p - 1).unwrap());
        }
    }

    #[test]
    fn quadvec_laws(quads in proptest::collection::vec(0u8..4, 0..6000)) {
        let a = RsQuadVector::new(&quads, QuadGeometry::Sb4096B512).unwrap();
        let b = RsQuadVector::new(&quads, QuadGeometry::Sb2048B256).unwrap();
        for i in (0..=quads.len()).step_by(7) {
            let total: usize = (0..4).map(|s| a.rank(s, i).unwrap()).sum();
            prop_assert_eq!(total, i);
            for s in 0..4 {
                prop_assert_eq!(a.rank(s, i), b.rank(s, i));
            }
        }
        for s in 0..4u8 {
            for j in 1..=a.occurrences(s) {
                let p = a.select(s, j).unwrap();
                prop_assert_eq!(b.select(s, j).unwrap(), p);
                prop_assert_eq!(a.rank(s, p).unwrap(), j);
                prop_assert_eq!(a.get(p - 1).unwrap(), s);
            }
        }
    }

    #[test]
    fn qwm_matches_binary_baselines((text, sigma) in text_and_sigma(), g in geometry()) {
        let m = QuadWaveletMatrix::new(&text, sigma, g).unwrap();
        let wm = BinaryWaveletMatrix::new(&text, sigma).unwrap();
        let wt = BinaryWaveletTree::new(&text, sigma).unwrap();
        prop_assert_eq!(m.levels(), wm.levels().div_ceil(2));
        for (i, &c) in text.iter().enumerate() {
            prop_assert_eq!(m.access(i).unwrap(), c as u32);
            prop_assert_eq!(wm.access(i).unwrap(), c as u32);
        }
        let probe: Vec<u32> = text.iter().take(20).map(|&c| c as u32).chain([0, sigma as u32 - 1]).collect();
        for &s in &probe {
            for i in (0..=text.len()).step_by(13) {
                let want = scan_rank(&text, s, i);
                prop_assert_eq!(m.rank(s, i).unwrap(), want);
                prop_assert_eq!(wm.rank(s, i).unwrap(), want);
                prop_assert_eq!(wt.rank(s, i).unwrap(), want);
            }
            let occ = scan_rank(&text, s, text.len());
            for j in 1..=occ {
                let p = m.select(s, j).unwrap();
                prop_assert_eq!(wm.select(s, j).unwrap(), p);
                prop_assert_eq!(m.rank(s, p).unwrap(), j);
                prop_assert_eq!(m.access(p - 1).unwrap(), s);
            }
            prop_assert!(m.select(s, occ + 1).is_err());
        }
    }

    #[test]
    fn rank_sums_to_position((text, sigma) in text_and_sigma()) {
        let m = QuadWaveletMatrix::new(&text, sigma, QuadGeometry::default()).unwrap();
        let present: std::collections::BTreeSet<u32> = text.iter().map(|&c| c as u32).collect();
        for i in (0..=text.len()).step_by(101) {
            let total: usize = present.iter().map(|&s| m.rank(s, i).unwrap()).sum();
            prop_assert_eq!(total, i);
        }
    }

    #[test]
    fn approx_rank_never_overestimates(quads in proptest::collection::vec(0u8..4, 0..4000), half in 1usize..40) {
        let eps = 2 * half;
        let qv = RsQuadVector::new(&quads, QuadGeometry::default()).unwrap();
        let a = ApproxRankIndex::from_quads(&qv, eps, false).unwrap();
        for s in 0..4u8 {
            prop_assert_eq!(a.bitmap(s).count_ones(), qv.occurrences(s) / half);
            for i in (0..=quads.len()).step_by(3) {
                let r = qv.rank(s, i).unwrap();
                let e = a.rank_approx(s, i).unwrap();
                prop_assert!(e <= r && r - e < eps);
            }
        }
    }

    #[test]
    fn corrected_chain_error_below_epsilon((text, sigma) in text_and_sigma(), half in 1usize..20) {
        let eps = 2 * half;
        let m = QuadWaveletMatrix::new(&text, sigma, QuadGeometry::default()).unwrap();
        let p = Predictor::corrected(&m, eps).unwrap();
        for &c in text.iter().take(30) {
            for i in (0..=text.len()).step_by(37) {
                let exact = m.exact_chain(c as u32, i);
                let est = corrected_chain(&m, &p, c as u32, i).unwrap();
                for (x, y) in exact.iter().zip(&est) {
                    prop_assert!(y <= x && x - y < eps);
                }
            }
        }
    }

    #[test]
    fn prefetching_rank_is_transparent((text, sigma) in text_and_sigma(), block in prop_oneof![Just(64usize), Just(256), Just(2048)]) {
        let mut m = QuadWaveletMatrix::new(&text, sigma, QuadGeometry::Sb2048B256).unwrap();
        m.build_predictor(block).unwrap();
        for &c in text.iter().take(20) {
            for i in (0..=text.len()).step_by(11) {
                prop_assert_eq!(m.rank_prefetch(c as u32, i), m.rank(c as u32, i));
            }
        }
    }

    #[test]
    fn qwm_encode_round_trip((text, sigma) in text_and_sigma(), with_predictor in any::<bool>()) {
        let mut m = QuadWaveletMatrix::new(&text, sigma, QuadGeometry::default()).unwrap();
        if with_predictor {
            m.build_predictor(128).unwrap();
        }
        let mut buf = Vec::new();
        m.encode(&mut buf);
        let back = QuadWaveletMatrix::decode(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn backward_search_counts(text in proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b'), Just(b'c')], 1..400),
                              pattern in proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b'), Just(b'c'), Just(b'd')], 1..6)) {
        let ix = FmCountIndex::new(&text, QuadGeometry::default()).unwrap();
        let naive = text.windows(pattern.len()).filter(|w| *w == pattern.as_slice()).count();
        prop_assert_eq!(ix.count(&pattern), naive);
        for c in [b'a', b'b', b'c'] {
            let mut longer = pattern.clone();
            longer.push(c);
            prop_assert!(ix.count(&longer) <= ix.count(&pattern));
        }
    }
}
