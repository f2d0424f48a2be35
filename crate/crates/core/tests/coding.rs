mod common;

use std::sync::Arc;

use bratteli::coding::{
    combine, decode_combined, header_width, huffman, lift, lift_n, rate, rate_trace, root_complement, EncoderArray,
    SequentialScheme, DEFAULT_LEVEL_CAP, DEFAULT_SMOOTHING,
};
use bratteli::diagram::{CanonicalDiagram, Indexing};
use bratteli::grid::{tau_theta_table, KuhnGrid};
use bratteli::source::{transport, IidSource};
use common::{arb_regular, pmf_from_raw};
use proptest::prelude::*;

fn raw() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 64)
}

proptest! {
    #[test]
    fn huffman_codes_are_proper_and_prefix_free(size in 1usize..40, r in raw()) {
        let p = pmf_from_raw(0, size, &r);
        let c = huffman(&p, DEFAULT_SMOOTHING);
        prop_assert!(c.is_proper());
        for a in 0..size {
            for b in 0..size {
                if a != b {
                    prop_assert!(!c.word(b).starts_with(c.word(a)));
                }
            }
            prop_assert_eq!(c.decode(c.word(a)).unwrap(), a);
        }
    }

    #[test]
    fn lifted_rate_matches_transported_rate((beta, d) in arb_regular(), r1 in raw(), r2 in raw(), flip: bool) {
        let idx = Indexing::lex(&d).unwrap();
        let n = d.max_level() - 1;
        let mut phi = huffman(&pmf_from_raw(n, d.level_size(n), &r1), DEFAULT_SMOOTHING);
        if flip && phi.len() > 1 {
            phi = root_complement(&phi).unwrap();
        }
        let lambda = pmf_from_raw(n + 1, d.level_size(n + 1), &r2);
        let lifted = lift(&phi, &d, &idx).unwrap();
        prop_assert!(lifted.is_proper() || d.level_size(n + 1) < d.level_size(n).pow(beta as u32));
        let lhs = rate(&lifted, &lambda, beta).unwrap();
        let rhs = rate(&phi, &transport(&d, &lambda).unwrap(), beta).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn combined_length_is_header_plus_shortest(r1 in raw(), r2 in raw(), r3 in raw(), size in 2usize..20) {
        let codes: Vec<_> = [r1, r2, r3].iter().map(|r| huffman(&pmf_from_raw(0, size, r), DEFAULT_SMOOTHING)).collect();
        let c = combine(&codes).unwrap();
        for v in 0..size {
            let best = codes.iter().map(|k| k.word(v).len()).min().unwrap();
            prop_assert_eq!(c.word(v).len(), header_width(3) + best);
            prop_assert_eq!(decode_combined(&codes, c.word(v)).unwrap().0, v);
        }
    }
}

#[test]
fn lifting_preserves_rate() {
    let s = IidSource::new(vec![0.6, 0.3, 0.1], 2).unwrap().table(3, 1 << 14).unwrap();
    let d = s.diagram();
    let idx = s.indexing().unwrap();
    let phi = huffman(s.pmf(0), DEFAULT_SMOOTHING);
    let base = rate(&phi, s.pmf(0), 2).unwrap();
    for times in 1..=3 {
        let lifted = lift_n(&phi, d, idx, times).unwrap();
        assert!((rate(&lifted, s.pmf(times), 2).unwrap() - base).abs() < 1e-12);
    }
}

#[test]
fn sequential_roundtrip_on_random_strings() {
    let d = CanonicalDiagram::from_chars("abc", 2, 2).unwrap().realize(2, 1 << 12).unwrap();
    let array = EncoderArray::build(Arc::new(d), DEFAULT_LEVEL_CAP, None).unwrap();
    let scheme = SequentialScheme::from_array(&array, 3, 2).unwrap();
    let mut rng = bratteli::rng::seeded(5);
    for k in 1..=7 {
        for _ in 0..50 {
            let x: Vec<usize> = (0..k).map(|_| rand::Rng::random_range(&mut rng, 0..3)).collect();
            let bits = scheme.encode(&x).unwrap();
            assert_eq!(bits.len(), scheme.length(&x).unwrap());
            assert_eq!(scheme.decode(k, &bits).unwrap(), x);
        }
    }
}

#[test]
fn kuhn_family_redundancy_shrinks() {
    // Over a theta sample: the worst normalized redundancy of tau_n obeys the
    // header-plus-best-row bound, the best-row rate never grows, and once the
    // header stops dominating (n >= 2) the worst redundancy shrinks.
    let grid = KuhnGrid::new(2, 1).unwrap();
    let thetas = [0.05, 0.2, 0.3, 0.45, 0.5, 0.6, 0.8, 0.95];
    let top = 4;
    let tables: Vec<_> = thetas.iter().map(|&t| tau_theta_table(grid, &[t], top, 1 << 20).unwrap()).collect();
    let array = EncoderArray::for_source(&tables[0], DEFAULT_LEVEL_CAP).unwrap();
    let mut worst = vec![0.0f64; top + 1];
    let mut worst_gap = vec![0.0f64; top + 1];
    for t in &tables {
        let rows = rate_trace(&array, t, top).unwrap();
        for row in &rows {
            let n = row.level;
            worst[n] = worst[n].max(row.rate - row.approximant);
            worst_gap[n] = worst_gap[n].max(row.best_row_rate - row.approximant);
            assert!(row.rate <= row.header + row.best_row_rate + 1e-12);
        }
        for w in rows.windows(2) {
            assert!(w[1].best_row_rate <= w[0].best_row_rate + 1e-12);
        }
    }
    for n in 0..=top {
        let header = ((n + 1) as f64).log2().ceil() / 2f64.powi(n as i32);
        assert!(worst[n] <= header + worst_gap[n] + 1e-12);
    }
    for w in worst[2..].windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{worst:?}");
    }
}
