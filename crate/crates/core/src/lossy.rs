//! Fixed-length lossy coding: minimum covering sets `M_n(delta, mu)`, the
//! entropy-rate distribution `F_mu` of a finite mixture, and the bounds
//! `R-(delta) <= R+(delta)` that sandwich the lossy rate.

use crate::error::{Error, Result};
use crate::source::{IidSource, LevelSource, MixtureSource, Pmf};

/// Cumulative masses within this distance of a threshold count as equal to
/// it, so sums like `0.1 + 0.2` do not move a plateau edge.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Smallest number of vertices carrying mass at least `1 - delta`. Vertices
/// are taken in decreasing probability, ties by ordinal.
pub fn min_covering_size(p: &Pmf, delta: f64) -> Result<usize> {
    min_covering_of(p.probs().to_vec(), delta)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

fn min_covering_of(mut probs: Vec<f64>, delta: f64) -> Result<usize> {
    check_delta(delta)?;
    // Stable sort keeps ordinal order among ties.
    probs.sort_by(|a, b| b.total_cmp(a));
    let need = 1.0 - delta - MASS_TOLERANCE;
    let mut acc = 0.0;
    for (i, q) in probs.iter().enumerate() {
        acc += q;
        if acc >= need {
            return Ok(i + 1);
        }
    }
    Ok(probs.len())
}

/// [`min_covering_size`] for a level of any enumerable source.
pub fn min_covering_size_at<S: LevelSource>(s: &S, level: usize, delta: f64, cap: u128) -> Result<usize> {
    min_covering_of(s.enumerate(level, cap)?.into_iter().map(|(_, p)| p).collect(), delta)
}

/// A right-continuous step CDF given by its jump points and the cumulative
/// mass reached at each.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    jumps: Vec<(f64, f64)>,
}

impl StepCdf {
    /// From `(weight, location)` point masses; weights must sum to one.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument("a CDF needs at least one atom".into()));
        }
        let total: f64 = atoms.iter().map(|(w, _)| w).sum();
        if atoms.iter().any(|(w, x)| *w < 0.0 || !x.is_finite()) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::WeightSum(total));
        }
        let mut sorted = atoms.to_vec();
        sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut jumps: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        let mut acc = 0.0;
        for (w, x) in sorted {
            acc += w;
            match jumps.last_mut() {
                Some(last) if last.0 == x => last.1 = acc,
                _ => jumps.push((x, acc)),
            }
        }
        jumps.last_mut().expect("non-empty").1 = 1.0;
        Ok(Self { jumps })
    }

    /// The empirical CDF of `samples`.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        let w = 1.0 / samples.len() as f64;
        let atoms: Vec<(f64, f64)> = samples.iter().map(|&x| (w, x)).collect();
        Self::from_atoms(&atoms)
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// `F(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.jumps.partition_point(|(at, _)| *at <= x) {
            0 => 0.0,
            k => self.jumps[k - 1].1,
        }
    }

    /// `R+(delta) = inf{x : F(x) > 1 - delta}`.
    pub fn r_plus(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        let level = 1.0 - delta + MASS_TOLERANCE;
        Ok(self.jumps.iter().find(|(_, c)| *c > level).unwrap_or(self.jumps.last().expect("non-empty")).0)
    }

    /// `R-(delta) = sup{x : F(x) < 1 - delta}`.
    pub fn r_minus(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        let level = 1.0 - delta - MASS_TOLERANCE;
        Ok(self.jumps.iter().find(|(_, c)| *c >= level).expect("last jump reaches 1").0)
    }
}

/// `F_mu` for a finite mixture given as `(weight, entropy rate)` pairs.
pub fn f_mu(components: &[(f64, f64)]) -> Result<StepCdf> {
    StepCdf::from_atoms(components)
}

/// `F_mu` of a mixture whose components report their entropy rates.
pub fn f_mu_of<S: LevelSource>(m: &MixtureSource<S>) -> Result<StepCdf> {
    f_mu(&m.component_rates()?)
}

pub fn r_plus(cdf: &StepCdf, delta: f64) -> Result<f64> {
    cdf.r_plus(delta)
}

pub fn r_minus(cdf: &StepCdf, delta: f64) -> Result<f64> {
    cdf.r_minus(delta)
}

/// Tolerance applied around `[R-, R+]` when comparing a finite-`n` trace.
pub fn sandwich_slack(beta: usize, n: usize) -> f64 {
    0.05f64.max(2.0 * (beta as f64).powi(-(n as i32)))
}

/// One row of a lossy trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyRow {
    pub level: usize,
    /// `M_n(delta, mu)` when it fits in a `u128`.
    pub covering: Option<u128>,
    pub log2_covering: f64,
    /// `beta^-n log2 M_n(delta, mu)` in bits per symbol.
    pub rate: f64,
}

impl LossyRow {
    fn new(level: usize, beta: usize, covering: Option<u128>, log2_covering: f64) -> Self {
        let rate = log2_covering / (beta as f64).powi(level as i32);
        Self { level, covering, log2_covering, rate }
    }
}

/// `beta^-n log2 M_n(delta, mu)` for `n = 0..=up_to` by enumeration.
pub fn lossy_rate_trace<S: LevelSource>(s: &S, delta: f64, up_to: usize, cap: u128) -> Result<Vec<LossyRow>> {
    (0..=up_to)
        .map(|n| {
            let m = min_covering_size_at(s, n, delta, cap)?;
            Ok(LossyRow::new(n, s.beta(), Some(m as u128), (m as f64).log2()))
        })
        .collect()
}

/// Binary sources on `D_2({0,1})` whose word probability depends only on
/// the word length and its number of ones, so levels split into type
/// classes and `M_n` needs no enumeration.
pub trait BinaryTypeSource {
    /// `log2` probability of one word of length `len` with `ones` ones.
    fn log2_type_prob(&self, len: usize, ones: usize) -> f64;
}

impl BinaryTypeSource for IidSource {
    fn log2_type_prob(&self, len: usize, ones: usize) -> f64 {
        let p = self.symbol_probs();
        let term = |q: f64, k: usize| if k == 0 { 0.0 } else { k as f64 * q.log2() };
        term(p[0], len - ones) + term(p[1], ones)
    }
}

impl<S: BinaryTypeSource + LevelSource> BinaryTypeSource for MixtureSource<S> {
    fn log2_type_prob(&self, len: usize, ones: usize) -> f64 {
        let terms: Vec<f64> =
            self.components().iter().map(|(w, c)| w.log2() + c.log2_type_prob(len, ones)).collect();
        log2_sum_exp2(&terms)
    }
}

fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp2()).sum::<f64>().log2()
}

/// `log2 M_n(delta, mu)` over words of length `len` from type classes:
/// classes are taken whole in decreasing word probability and the last one
/// partially.
pub fn binary_type_covering_log2<S: BinaryTypeSource>(s: &S, len: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let mut ln_fact = vec![0.0f64; len + 1];
    for i in 1..=len {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let log2_binom = |k: usize| (ln_fact[len] - ln_fact[k] - ln_fact[len - k]) / std::f64::consts::LN_2;
    let mut classes: Vec<(f64, f64)> = (0..=len).map(|k| (s.log2_type_prob(len, k), log2_binom(k))).collect();
    classes.retain(|(lp, _)| lp.is_finite());
    classes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let need = 1.0 - delta - MASS_TOLERANCE;
    let mut acc = 0.0;
    let mut taken: Vec<f64> = Vec::new();
    for (lp, lcount) in classes {
        let mass = (lp + lcount).exp2();
        if acc + mass >= need {
            // ceil((need - acc) / p) words of this class finish the cover.
            let words = ((need - acc).max(0.0).log2() - lp).exp2().ceil().max(1.0);
            taken.push(words.log2().min(lcount));
            return Ok(log2_sum_exp2(&taken));
        }
        acc += mass;
        taken.push(lcount);
    }
    Ok(log2_sum_exp2(&taken))
}

/// [`lossy_rate_trace`] through type classes, for the given levels.
pub fn lossy_rate_trace_types<S: BinaryTypeSource>(s: &S, delta: f64, levels: &[usize]) -> Result<Vec<LossyRow>> {
    levels
        .iter()
        .map(|&n| {
            let len = 1usize.checked_shl(n as u32).filter(|&l| l <= 1 << 24).ok_or(Error::CapExceeded {
                what: format!("type classes at level {n}"),
                size: u128::MAX,
                cap: 1 << 24,
            })?;
            let l2 = binary_type_covering_log2(s, len, delta)?;
            let exact = if l2 < 100.0 { Some(l2.exp2().round() as u128) } else { None };
            Ok(LossyRow::new(n, 2, exact, l2))
        })
        .collect()
}
