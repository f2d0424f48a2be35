use std::collections::HashMap;

use rand::Rng;

use super::{LevelSource, Pmf, TableSource, PMF_TOLERANCE};
use crate::diagram::IndexedLevels;
use crate::error::{Error, Result};

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::WeightSum(w));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > PMF_TOLERANCE {
        return Err(Error::WeightSum(sum));
    }
    Ok(())
}

/// Level-wise weighted sum of explicit sources sharing one diagram.
pub fn mix_tables(components: &[(f64, TableSource)]) -> Result<TableSource> {
    check_weights(components.iter().map(|(w, _)| *w))?;
    let (_, first) = components.first().ok_or(Error::WeightSum(0.0))?;
    for (_, c) in components {
        if c.diagram() != first.diagram() {
            return Err(Error::InvalidArgument("mixture components must share a diagram".into()));
        }
    }
    let levels = (0..=first.top_level())
        .map(|n| {
            let mut probs = vec![0.0; first.pmf(n).len()];
            for (w, c) in components {
                for (acc, p) in probs.iter_mut().zip(c.pmf(n).probs()) {
                    *acc += w * p;
                }
            }
            Pmf::new(n, probs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mixed = TableSource::new(first.diagram_arc(), levels)?;
    if let Some(idx) = first.indexing() {
        mixed = mixed.with_indexing(idx.clone())?;
    }
    Ok(mixed)
}

/// A finite mixture of oracle sources of one kind.
#[derive(Debug, Clone)]
pub struct MixtureSource<S> {
    components: Vec<(f64, S)>,
}

impl<S: LevelSource> MixtureSource<S> {
    pub fn new(components: Vec<(f64, S)>) -> Result<Self> {
        check_weights(components.iter().map(|(w, _)| *w))?;
        let beta = components[0].1.beta();
        if components.iter().any(|(_, c)| c.beta() != beta) {
            return Err(Error::InvalidArgument("mixture components must share beta".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, S)] {
        &self.components
    }

    /// `(weight, entropy rate)` per component; fails if any rate is unknown.
    pub fn component_rates(&self) -> Result<Vec<(f64, f64)>> {
        self.components
            .iter()
            .map(|(w, c)| c.entropy_rate().map(|r| (*w, r)).ok_or(Error::UnknownRate))
            .collect()
    }

    /// Draws a component index and a vertex from it.
    pub fn sample_with_component<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<(usize, S::Vertex)> {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = self.components.len() - 1;
        for (i, (w, _)) in self.components.iter().enumerate() {
            acc += w;
            if u < acc {
                pick = i;
                break;
            }
        }
        Ok((pick, self.components[pick].1.sample(level, rng)?))
    }
}

impl<S: LevelSource> IndexedLevels for MixtureSource<S> {
    type Vertex = S::Vertex;

    fn beta(&self) -> usize {
        self.components[0].1.beta()
    }

    fn part(&self, level: usize, x: &S::Vertex, i: usize) -> S::Vertex {
        self.components[0].1.part(level, x, i)
    }
}

impl<S: LevelSource> LevelSource for MixtureSource<S> {
    fn max_level(&self) -> Option<usize> {
        self.components.iter().filter_map(|(_, c)| c.max_level()).min()
    }

    fn log2_prob(&self, level: usize, x: &S::Vertex) -> f64 {
        let terms: Vec<f64> =
            self.components.iter().map(|(w, c)| w.log2() + c.log2_prob(level, x)).collect();
        let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + terms.iter().map(|t| (t - m).exp2()).sum::<f64>().log2()
    }

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<S::Vertex> {
        self.sample_with_component(level, rng).map(|(_, x)| x)
    }

    fn entropy_rate(&self) -> Option<f64> {
        let rates = self.component_rates().ok()?;
        Some(rates.iter().map(|(w, r)| w * r).sum())
    }

    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(S::Vertex, f64)>> {
        let mut order: Vec<S::Vertex> = Vec::new();
        let mut mass: HashMap<S::Vertex, f64> = HashMap::new();
        for (w, c) in &self.components {
            for (x, p) in c.enumerate(level, cap)? {
                let slot = mass.entry(x.clone()).or_insert_with(|| {
                    order.push(x);
                    0.0
                });
                *slot += w * p;
            }
        }
        if order.len() as u128 > cap {
            return Err(Error::CapExceeded { what: format!("level {level}"), size: order.len() as u128, cap });
        }
        Ok(order.into_iter().map(|x| {
            let p = mass[&x];
            (x, p)
        }).collect())
    }
}
