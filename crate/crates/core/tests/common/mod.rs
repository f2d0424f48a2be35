#![allow(dead_code)]

use bratteli::diagram::Diagram;
use bratteli::source::Pmf;
use proptest::prelude::*;

/// Builds a diagram from raw choices, keeping only regular ones: every
/// vertex below is used, and extra vertices draw arbitrary multisets.
pub fn regular_from(beta: usize, base: usize, picks: &[Vec<Vec<usize>>]) -> Option<Diagram> {
    let mut sizes = vec![base];
    let mut sources = Vec::new();
    for extra in picks {
        let below = *sizes.last().unwrap();
        let mut level: Vec<Vec<usize>> = (0..below)
            .step_by(beta)
            .map(|start| (0..beta).map(|i| (start + i) % below).collect())
            .collect();
        for m in extra {
            level.push(m.iter().map(|&c| c % below).collect());
        }
        sizes.push(level.len());
        sources.push(level);
    }
    let d = Diagram::unlabeled(&sizes, sources).ok()?;
    d.check_regular(beta).regular.then_some(d)
}

pub fn arb_regular() -> impl Strategy<Value = (usize, Diagram)> {
    (2usize..=3, 2usize..=3, 1usize..=3)
        .prop_flat_map(|(beta, base, levels)| {
            let multiset = prop::collection::vec(0usize..16, beta);
            let level = prop::collection::vec(multiset, 0..=4);
            (Just(beta), Just(base), prop::collection::vec(level, levels))
        })
        .prop_filter_map("irregular", |(beta, base, picks)| regular_from(beta, base, &picks).map(|d| (beta, d)))
}

pub fn arb_weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_map(|mut w| {
        if w.iter().sum::<f64>() == 0.0 {
            w[0] = 1.0;
        }
        let t: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= t);
        w
    })
}

pub fn pmf(level: usize, w: Vec<f64>) -> Pmf {
    Pmf::new(level, w).expect("normalized weights")
}

/// A level-`level` PMF on `size` vertices from raw non-negative draws,
/// padding with zeros and keeping the first entry positive.
pub fn pmf_from_raw(level: usize, size: usize, raw: &[f64]) -> Pmf {
    let mut w: Vec<f64> = raw.iter().copied().take(size).collect();
    w.resize(size, 0.0);
    w[0] += 1e-3;
    let t: f64 = w.iter().sum();
    pmf(level, w.into_iter().map(|x| x / t).collect())
}
