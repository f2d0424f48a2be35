use std::collections::{BTreeMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use super::{Diagram, Multiset};
use crate::error::{Error, Result};

/// A diagram together with an ordering of every vertex's sources.
///
/// `part(n, x, i)` is the `i`-th source of the level-`n` vertex `x`.
pub trait IndexedLevels {
    type Vertex: Clone + Eq + Hash + Debug;

    fn beta(&self) -> usize;

    fn part(&self, level: usize, x: &Self::Vertex, i: usize) -> Self::Vertex;

    /// All `beta` parts in order.
    fn parts(&self, level: usize, x: &Self::Vertex) -> Vec<Self::Vertex> {
        (0..self.beta()).map(|i| self.part(level, x, i)).collect()
    }

    /// The level-0 sequence of length `beta^level` obtained by repeated
    /// decomposition.
    fn eta(&self, level: usize, x: &Self::Vertex) -> Vec<Self::Vertex> {
        let mut current = vec![x.clone()];
        for n in (1..=level).rev() {
            current = current.iter().flat_map(|v| self.parts(n, v)).collect();
        }
        current
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexing {
    beta: usize,
    // tuples[n][k]: ordered sources of n:k; tuples[0] is empty.
    tuples: Vec<Vec<Vec<usize>>>,
}

impl Indexing {
    /// The default indexing: vertices of a level sharing a multiset receive,
    /// in ordinal order, the lexicographically first distinct orderings of
    /// that multiset.
    pub fn lex(d: &Diagram) -> Result<Self> {
        let beta = d.require_regular()?;
        let mut tuples = vec![Vec::new()];
        for n in 1..=d.max_level() {
            let mut groups: BTreeMap<Multiset, Vec<usize>> = BTreeMap::new();
            for k in 0..d.level_size(n) {
                groups.entry(d.multiset(n, k)).or_default().push(k);
            }
            let mut level = vec![Vec::new(); d.level_size(n)];
            for (m, members) in groups {
                let mut perm = m.into_vec();
                for (j, &k) in members.iter().enumerate() {
                    if j > 0 {
                        let advanced = next_permutation(&mut perm);
                        debug_assert!(advanced, "regularity guarantees enough orderings");
                    }
                    level[k] = perm.clone();
                }
            }
            tuples.push(level);
        }
        Ok(Self { beta, tuples })
    }

    /// Uses each vertex's source list in the order it was given.
    pub fn from_source_order(d: &Diagram) -> Result<Self> {
        let beta = d.require_regular()?;
        let tuples = (0..=d.max_level())
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    (0..d.level_size(n)).map(|k| d.sources(n, k).to_vec()).collect()
                }
            })
            .collect();
        let idx = Self { beta, tuples };
        idx.validate(d)?;
        Ok(idx)
    }

    /// An explicit indexing; `tuples[n - 1][k]` orders the sources of `n:k`.
    pub fn from_tuples(d: &Diagram, tuples: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let beta = d.require_regular()?;
        let mut all = vec![Vec::new()];
        all.extend(tuples);
        let idx = Self { beta, tuples: all };
        idx.validate(d)?;
        Ok(idx)
    }

    /// Checks that every tuple is an ordering of the vertex's multiset and
    /// that no two vertices of a level share a tuple.
    pub fn validate(&self, d: &Diagram) -> Result<()> {
        if self.tuples.len() != d.max_level() + 1 {
            return Err(Error::LevelMismatch { expected: d.max_level(), found: self.tuples.len() - 1 });
        }
        for n in 1..=d.max_level() {
            if self.tuples[n].len() != d.level_size(n) {
                return Err(Error::MalformedDiagram(format!("indexing of level {n} has wrong size")));
            }
            let mut seen = HashSet::new();
            for (k, t) in self.tuples[n].iter().enumerate() {
                if Multiset::new(t.clone()) != d.multiset(n, k) {
                    return Err(Error::MalformedDiagram(format!(
                        "tuple {t:?} of vertex {n}:{k} is not an ordering of its multiset"
                    )));
                }
                if !seen.insert(t.as_slice()) {
                    return Err(Error::MalformedDiagram(format!(
                        "tuple {t:?} is used twice on level {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn max_level(&self) -> usize {
        self.tuples.len() - 1
    }

    pub fn tuple(&self, level: usize, ordinal: usize) -> &[usize] {
        &self.tuples[level][ordinal]
    }

    pub fn part(&self, level: usize, ordinal: usize, i: usize) -> usize {
        self.tuples[level][ordinal][i]
    }
}

/// Rearranges into the next lexicographic permutation; returns false (and
/// leaves the slice sorted ascending) after the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A diagram bundled with one of its indexings.
#[derive(Debug, Clone)]
pub struct IndexedDiagram {
    pub diagram: Arc<Diagram>,
    pub indexing: Indexing,
}

impl IndexedDiagram {
    pub fn lex(diagram: Diagram) -> Result<Self> {
        let indexing = Indexing::lex(&diagram)?;
        Ok(Self { diagram: Arc::new(diagram), indexing })
    }

    pub fn from_source_order(diagram: Diagram) -> Result<Self> {
        let indexing = Indexing::from_source_order(&diagram)?;
        Ok(Self { diagram: Arc::new(diagram), indexing })
    }

    /// Level-0 labels along the decomposition of `level:ordinal`, each
    /// separated by a space.
    pub fn eta_labels(&self, level: usize, ordinal: usize) -> Vec<&str> {
        self.eta(level, &ordinal).into_iter().map(|k| self.diagram.label(0, k)).collect()
    }
}

impl IndexedLevels for IndexedDiagram {
    type Vertex = usize;

    fn beta(&self) -> usize {
        self.indexing.beta
    }

    fn part(&self, level: usize, x: &usize, i: usize) -> usize {
        self.indexing.part(level, *x, i)
    }
}
