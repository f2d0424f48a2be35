mod common;

use bratteli::lossy::{
    f_mu, lossy_rate_trace, lossy_rate_trace_types, min_covering_size, sandwich_slack, StepCdf,
};
use bratteli::source::{binary_entropy, IidSource, MixtureSource, Pmf};
use common::pmf_from_raw;
use proptest::prelude::*;

fn brute_force_covering(p: &Pmf, delta: f64) -> usize {
    let m = p.len();
    (0u32..1 << m)
        .filter(|set| (0..m).filter(|i| set >> i & 1 == 1).map(|i| p.get(i)).sum::<f64>() >= 1.0 - delta - 1e-12)
        .map(|set| set.count_ones() as usize)
        .min()
        .unwrap()
}

fn arb_cdf() -> impl Strategy<Value = StepCdf> {
    prop::collection::vec((0.01f64..1.0, 0.0f64..2.0), 1..6).prop_map(|atoms| {
        let t: f64 = atoms.iter().map(|(w, _)| w).sum();
        let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(w, x)| (w / t, x)).collect();
        StepCdf::from_atoms(&atoms).unwrap()
    })
}

proptest! {
    #[test]
    fn greedy_covering_is_optimal(size in 1usize..=12, raw in prop::collection::vec(0.0f64..1.0, 12), delta in 0.0f64..0.99) {
        let p = pmf_from_raw(0, size, &raw);
        prop_assert_eq!(min_covering_size(&p, delta).unwrap(), brute_force_covering(&p, delta));
    }

    #[test]
    fn covering_size_does_not_grow_with_delta(size in 1usize..=30, raw in prop::collection::vec(0.0f64..1.0, 30), a in 0.0f64..0.99, b in 0.0f64..0.99) {
        let p = pmf_from_raw(0, size, &raw);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(min_covering_size(&p, hi).unwrap() <= min_covering_size(&p, lo).unwrap());
    }

    #[test]
    fn rate_bounds_are_ordered_and_monotone(cdf in arb_cdf(), a in 0.001f64..0.999, b in 0.001f64..0.999) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for d in [lo, hi] {
            prop_assert!(cdf.r_minus(d).unwrap() <= cdf.r_plus(d).unwrap());
        }
        prop_assert!(cdf.r_plus(hi).unwrap() <= cdf.r_plus(lo).unwrap());
        prop_assert!(cdf.r_minus(hi).unwrap() <= cdf.r_minus(lo).unwrap());
    }
}

#[test]
fn gaps_sit_exactly_on_plateau_levels() {
    let cdf = f_mu(&[(0.25, 0.2), (0.5, 0.5), (0.25, 0.9)]).unwrap();
    let gaps: Vec<usize> = (1..1000)
        .filter(|&i| {
            let d = i as f64 / 1000.0;
            cdf.r_minus(d).unwrap() < cdf.r_plus(d).unwrap()
        })
        .collect();
    // 1 - delta must equal 0.25 or 0.75.
    assert_eq!(gaps, vec![250, 750]);
}

#[test]
fn enumerated_and_type_class_traces_agree() {
    let s = IidSource::bernoulli(0.2, 2).unwrap();
    let t = s.table(4, 1 << 17).unwrap();
    for delta in [0.05, 0.3, 0.7] {
        let a = lossy_rate_trace(&t, delta, 4, 1 << 17).unwrap();
        let b = lossy_rate_trace_types(&s, delta, &[0, 1, 2, 3, 4]).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.covering, y.covering, "delta {delta}, level {}", x.level);
        }
    }
}

#[test]
fn deep_traces_land_inside_the_sandwich() {
    let n = 12;
    let slack = sandwich_slack(2, n);
    let bern = IidSource::bernoulli(0.1, 2).unwrap();
    for delta in [0.1, 0.5] {
        let r = lossy_rate_trace_types(&bern, delta, &[n]).unwrap()[0].rate;
        assert!((r - binary_entropy(0.1)).abs() <= slack, "delta {delta}: {r}");
    }
    let mix = MixtureSource::new(vec![
        (0.4, IidSource::bernoulli(0.1, 2).unwrap()),
        (0.6, IidSource::bernoulli(0.4, 2).unwrap()),
    ])
    .unwrap();
    let cdf = f_mu(&mix.component_rates().unwrap()).unwrap();
    for delta in [0.8, 0.6, 0.3] {
        let r = lossy_rate_trace_types(&mix, delta, &[n]).unwrap()[0].rate;
        let (lo, hi) = (cdf.r_minus(delta).unwrap(), cdf.r_plus(delta).unwrap());
        assert!(r >= lo - slack && r <= hi + slack, "delta {delta}: {r} outside [{lo}, {hi}]");
    }
}
