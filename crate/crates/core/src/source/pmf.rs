use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// Tolerance on PMF sums and on transport consistency.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// A probability mass function on the vertices of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    level: usize,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(level: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidPmf(format!("entry {p} is not a nonnegative number")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidPmf(format!("entries sum to {sum}")));
        }
        Ok(Self { level, probs })
    }

    pub fn uniform(level: usize, size: usize) -> Self {
        Self { level, probs: vec![1.0 / size as f64; size] }
    }

    pub fn point_mass(level: usize, size: usize, at: usize) -> Self {
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Self { level, probs }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, ordinal: usize) -> f64 {
        self.probs[ordinal]
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.probs)
    }

    /// `w * self + (1 - w) * other`.
    pub fn blend(&self, w: f64, other: &Pmf) -> Result<Pmf> {
        if self.level != other.level || self.len() != other.len() {
            return Err(Error::LevelMismatch { expected: self.level, found: other.level });
        }
        let probs = self.probs.iter().zip(&other.probs).map(|(a, b)| w * a + (1.0 - w) * b).collect();
        Ok(Pmf { level: self.level, probs })
    }

    pub(crate) fn from_raw(level: usize, probs: Vec<f64>) -> Self {
        Self { level, probs }
    }
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// `h(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

/// Pushes a PMF on level `n + 1` down to level `n`: every vertex splits its
/// mass evenly over its incoming edges and each edge delivers its share to
/// its source.
pub fn transport(d: &Diagram, lambda: &Pmf) -> Result<Pmf> {
    let n1 = lambda.level();
    if n1 == 0 || n1 > d.max_level() || lambda.len() != d.level_size(n1) {
        return Err(Error::LevelMismatch { expected: d.max_level(), found: n1 });
    }
    let mut out = vec![0.0; d.level_size(n1 - 1)];
    for (v, &p) in lambda.probs().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let src = d.sources(n1, v);
        let share = p / src.len() as f64;
        for &s in src {
            out[s] += share;
        }
    }
    Ok(Pmf::from_raw(n1 - 1, out))
}
