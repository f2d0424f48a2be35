use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{transport, LevelSource, Pmf};
use crate::diagram::{pascal, Diagram, IndexedLevels, Indexing};
use crate::error::{Error, Result};

/// A source given by an explicit PMF on every level of a finite diagram.
#[derive(Debug, Clone)]
pub struct TableSource {
    diagram: Arc<Diagram>,
    indexing: Option<Indexing>,
    levels: Vec<Pmf>,
    samplers: Vec<WeightedIndex<f64>>,
    entropy_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub consistent: bool,
    pub max_deviation: f64,
}

impl TableSource {
    /// Wraps one PMF per level `0..=max_level`. Consistency is not checked
    /// here; see [`TableSource::validate`].
    pub fn new(diagram: impl Into<Arc<Diagram>>, levels: Vec<Pmf>) -> Result<Self> {
        let diagram = diagram.into();
        if levels.len() != diagram.max_level() + 1 {
            return Err(Error::LevelMismatch { expected: diagram.max_level(), found: levels.len().wrapping_sub(1) });
        }
        for (n, p) in levels.iter().enumerate() {
            if p.level() != n || p.len() != diagram.level_size(n) {
                return Err(Error::LevelMismatch { expected: n, found: p.level() });
            }
        }
        let samplers = levels
            .iter()
            .map(|p| WeightedIndex::new(p.probs()).map_err(|e| Error::InvalidPmf(e.to_string())))
            .collect::<Result<_>>()?;
        let indexing = Indexing::lex(&diagram).ok();
        Ok(Self { diagram, indexing, levels, samplers, entropy_rate: None })
    }

    /// Replaces the default (lexicographic) indexing.
    pub fn with_indexing(mut self, indexing: Indexing) -> Result<Self> {
        indexing.validate(&self.diagram)?;
        self.indexing = Some(indexing);
        Ok(self)
    }

    pub fn with_entropy_rate(mut self, rate: f64) -> Self {
        self.entropy_rate = Some(rate);
        self
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn diagram_arc(&self) -> Arc<Diagram> {
        self.diagram.clone()
    }

    pub fn indexing(&self) -> Option<&Indexing> {
        self.indexing.as_ref()
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn pmf(&self, level: usize) -> &Pmf {
        &self.levels[level]
    }

    pub fn pmfs(&self) -> &[Pmf] {
        &self.levels
    }

    /// Compares every level with the transport of the level above.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut max_dev: f64 = 0.0;
        for n in 0..self.top_level() {
            let pushed = transport(&self.diagram, &self.levels[n + 1]).expect("levels match the diagram");
            for (a, b) in pushed.probs().iter().zip(self.levels[n].probs()) {
                max_dev = max_dev.max((a - b).abs());
            }
        }
        ValidationReport { consistent: max_dev <= tol, max_deviation: max_dev }
    }

    /// Exact `beta^-n H(mu_n)` for every level.
    pub fn approximants(&self) -> Vec<f64> {
        let beta = self.diagram.beta().unwrap_or(1) as f64;
        self.levels.iter().enumerate().map(|(n, p)| p.entropy() / beta.powi(n as i32)).collect()
    }
}

/// The source whose top-level PMF is `top`; lower levels are transports.
pub fn extend_down(diagram: impl Into<Arc<Diagram>>, top: Pmf) -> Result<TableSource> {
    let diagram = diagram.into();
    let n = diagram.max_level();
    if top.level() != n || top.len() != diagram.level_size(n) {
        return Err(Error::LevelMismatch { expected: n, found: top.level() });
    }
    let mut levels = vec![top];
    for _ in 0..n {
        let below = transport(&diagram, levels.last().expect("nonempty"))?;
        levels.push(below);
    }
    levels.reverse();
    TableSource::new(diagram, levels)
}

/// Point masses at the left corner `v_0(n)` of the Pascal diagram.
pub fn pascal_sigma(max_level: usize) -> TableSource {
    let d = pascal(max_level);
    let top = Pmf::point_mass(max_level, max_level + 2, 0);
    extend_down(d, top).expect("pascal corner source").with_entropy_rate(0.0)
}

/// Point masses at the right corner `v_{n+1}(n)` of the Pascal diagram.
pub fn pascal_tau(max_level: usize) -> TableSource {
    let d = pascal(max_level);
    let top = Pmf::point_mass(max_level, max_level + 2, max_level + 1);
    extend_down(d, top).expect("pascal corner source").with_entropy_rate(0.0)
}

/// `w * sigma + (1 - w) * tau` on the Pascal diagram.
pub fn pascal_mixture(max_level: usize, w: f64) -> TableSource {
    super::mix_tables(&[(w, pascal_sigma(max_level)), (1.0 - w, pascal_tau(max_level))])
        .expect("pascal mixture")
        .with_entropy_rate(0.0)
}

impl IndexedLevels for TableSource {
    type Vertex = usize;

    fn beta(&self) -> usize {
        self.diagram.beta().expect("source diagram has a common in-degree")
    }

    fn part(&self, level: usize, x: &usize, i: usize) -> usize {
        self.indexing.as_ref().expect("source diagram is regular").part(level, *x, i)
    }
}

impl LevelSource for TableSource {
    fn max_level(&self) -> Option<usize> {
        Some(self.top_level())
    }

    fn log2_prob(&self, level: usize, x: &usize) -> f64 {
        self.levels[level].get(*x).log2()
    }

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<usize> {
        let sampler = self
            .samplers
            .get(level)
            .ok_or(Error::LevelMismatch { expected: self.top_level(), found: level })?;
        Ok(sampler.sample(rng))
    }

    fn entropy_rate(&self) -> Option<f64> {
        self.entropy_rate
    }

    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(usize, f64)>> {
        let p = self
            .levels
            .get(level)
            .ok_or(Error::LevelMismatch { expected: self.top_level(), found: level })?;
        if p.len() as u128 > cap {
            return Err(Error::CapExceeded { what: format!("level {level}"), size: p.len() as u128, cap });
        }
        Ok(p.probs().iter().copied().enumerate().collect())
    }
}
