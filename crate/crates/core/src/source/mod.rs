//! Bratteli-Vershik sources: level-indexed PMF families consistent under
//! edge transport.
//!
//! Two forms are provided. [`TableSource`] stores an explicit PMF for every
//! level of a finite diagram. Oracle sources ([`IidSource`], [`MarkovSource`],
//! [`MixtureSource`], and the Kuhn family in `grid`) answer pointwise
//! log-probability and sampling queries at arbitrary depth.

mod iid;
mod mixture;
mod pmf;
mod table;

use rand::Rng;

pub use iid::{embed_sequential, IidSource, MarkovSource};
pub use mixture::{mix_tables, MixtureSource};
pub use pmf::{binary_entropy, entropy, transport, Pmf, PMF_TOLERANCE};
pub use table::{extend_down, pascal_mixture, pascal_sigma, pascal_tau, TableSource, ValidationReport};

use crate::diagram::IndexedLevels;
use crate::error::{Error, Result};

/// Pointwise and sampling access to a source on an indexed diagram.
pub trait LevelSource: IndexedLevels {
    /// Deepest level available, or `None` when unbounded.
    fn max_level(&self) -> Option<usize>;

    /// `log2 mu_n(x)`; `-inf` outside the support.
    fn log2_prob(&self, level: usize, x: &Self::Vertex) -> f64;

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<Self::Vertex>;

    /// The entropy rate when known in closed form.
    fn entropy_rate(&self) -> Option<f64> {
        None
    }

    /// Every vertex of the level with its probability, in a fixed order.
    /// Fails with `CapExceeded` when the level has more than `cap` vertices.
    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(Self::Vertex, f64)>>;

    fn prob(&self, level: usize, x: &Self::Vertex) -> f64 {
        self.log2_prob(level, x).exp2()
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self { mean, std_err: (var / n as f64).sqrt(), samples: n }
    }

    /// Whether `target` lies within `k` standard errors of the mean. A zero
    /// standard error demands agreement to 1e-12.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= (k * self.std_err).max(1e-12)
    }
}

/// One entropy-rate approximant `beta^-n H(mu_n)`. `std_err` is zero when
/// the level was enumerated exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximant {
    pub level: usize,
    pub value: f64,
    pub std_err: f64,
}

/// `H(mu_n)` by enumeration.
pub fn level_entropy<S: LevelSource>(s: &S, level: usize, cap: u128) -> Result<f64> {
    let probs: Vec<f64> = s.enumerate(level, cap)?.into_iter().map(|(_, p)| p).collect();
    Ok(entropy(&probs))
}

/// Monte Carlo estimate of `H(mu_n)` as the mean of `-log2 mu_n(X_n)`.
pub fn level_entropy_mc<S: LevelSource, R: Rng + ?Sized>(
    s: &S,
    level: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Estimate> {
    let mut xs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = s.sample(level, rng)?;
        let lp = s.log2_prob(level, &x);
        if !lp.is_finite() {
            return Err(Error::ZeroProbabilityVertex(level));
        }
        xs.push(-lp);
    }
    Ok(Estimate::from_samples(&xs))
}

/// `beta^-n H(mu_n)` for `n = 0..=up_to`. Levels with at most `cap` vertices
/// are enumerated; deeper ones fall back to `samples` Monte Carlo draws, or
/// fail with `CapExceeded` when `samples` is zero.
pub fn entropy_rate_approximants<S: LevelSource, R: Rng + ?Sized>(
    s: &S,
    up_to: usize,
    cap: u128,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<Approximant>> {
    let beta = s.beta() as f64;
    let mut out = Vec::with_capacity(up_to + 1);
    for n in 0..=up_to {
        let scale = beta.powi(-(n as i32));
        let approx = match level_entropy(s, n, cap) {
            Ok(h) => Approximant { level: n, value: scale * h, std_err: 0.0 },
            Err(Error::CapExceeded { .. }) if samples > 0 => {
                let e = level_entropy_mc(s, n, samples, rng)?;
                Approximant { level: n, value: scale * e.mean, std_err: scale * e.std_err }
            }
            Err(e) => return Err(e),
        };
        out.push(approx);
    }
    Ok(out)
}

/// Checks an oracle level by enumeration: probabilities must sum to one and
/// sampled frequencies must match them. Each vertex is tested with the
/// Bernstein bound `|f - p| <= z sd + z^2 / (3 samples)`, which stays valid
/// for vertices with tiny expected counts where the plain normal bound does
/// not. Returns the maximum absolute frequency deviation and whether all
/// checks passed.
pub fn validate_oracle<S: LevelSource, R: Rng + ?Sized>(
    s: &S,
    level: usize,
    samples: usize,
    cap: u128,
    z: f64,
    rng: &mut R,
) -> Result<ValidationReport> {
    use std::collections::HashMap;
    let table = s.enumerate(level, cap)?;
    let total: f64 = table.iter().map(|(_, p)| p).sum();
    let mut index = HashMap::with_capacity(table.len());
    for (i, (v, _)) in table.iter().enumerate() {
        index.insert(v.clone(), i);
    }
    let mut counts = vec![0usize; table.len()];
    for _ in 0..samples {
        let x = s.sample(level, rng)?;
        match index.get(&x) {
            Some(&i) => counts[i] += 1,
            None => return Err(Error::ZeroProbabilityVertex(level)),
        }
    }
    let n = samples as f64;
    let mut max_dev: f64 = (total - 1.0).abs();
    let mut ok = max_dev <= PMF_TOLERANCE;
    for ((_, p), &c) in table.iter().zip(&counts) {
        let freq = c as f64 / n;
        let dev = (freq - p).abs();
        max_dev = max_dev.max(dev);
        let sd = (p * (1.0 - p) / n).sqrt();
        if *p == 0.0 && c > 0 || dev > z * sd + z * z / (3.0 * n) + 1e-12 {
            ok = false;
        }
    }
    Ok(ValidationReport { consistent: ok, max_deviation: max_dev })
}
