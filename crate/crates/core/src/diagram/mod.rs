//! Leveled Bratteli diagrams truncated at a finite depth.
//!
//! A diagram is stored as its vertex levels plus, for every vertex above
//! level 0, the ordered list of source vertices of its incoming edges. The
//! unordered view of that list is the vertex's source multiset; the order
//! given at construction is kept so that canonical diagrams can carry their
//! natural (β-decomposition) indexing.

mod canonical;
mod indexing;
pub mod json;
mod multiset;

use std::collections::HashMap;
use std::fmt;

pub use canonical::{canonicalize, CanonicalDiagram, CanonicalImage, CanonicalWords, DEFAULT_LEVEL_CAP};
pub use indexing::{IndexedDiagram, IndexedLevels, Indexing};
pub use multiset::{orderings_count, Multiset};
pub(crate) use indexing::next_permutation;
pub(crate) use multiset::multinomial;

use crate::error::{Error, Result};

/// A vertex, identified by level and ordinal within the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub level: usize,
    pub ordinal: usize,
}

impl VertexId {
    pub fn new(level: usize, ordinal: usize) -> Self {
        Self { level, ordinal }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.ordinal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    labels: Vec<Vec<String>>,
    // sources[n][k]: ordered level-(n-1) sources of vertex n:k; sources[0] holds empty lists.
    sources: Vec<Vec<Vec<usize>>>,
    beta: Option<usize>,
}

impl Diagram {
    /// Builds a diagram from vertex labels per level and, for each level
    /// `n >= 1`, the source list of every vertex (`sources[n - 1][k]`).
    ///
    /// Fails when a level is empty, a source list is empty, or a vertex
    /// below the top level feeds no edge.
    pub fn new(labels: Vec<Vec<String>>, sources: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyLevel(0));
        }
        if sources.len() + 1 != labels.len() {
            return Err(Error::MalformedDiagram(format!(
                "{} vertex levels but source lists for {} levels",
                labels.len(),
                sources.len()
            )));
        }
        for (n, level) in labels.iter().enumerate() {
            if level.is_empty() {
                return Err(Error::EmptyLevel(n));
            }
        }
        let mut all = Vec::with_capacity(labels.len());
        all.push(vec![Vec::new(); labels[0].len()]);
        for (i, level_sources) in sources.into_iter().enumerate() {
            let n = i + 1;
            if level_sources.len() != labels[n].len() {
                return Err(Error::MalformedDiagram(format!(
                    "level {n} has {} vertices but {} source lists",
                    labels[n].len(),
                    level_sources.len()
                )));
            }
            let below = labels[n - 1].len();
            let mut fed = vec![false; below];
            for (k, list) in level_sources.iter().enumerate() {
                if list.is_empty() {
                    return Err(Error::EmptyMultiset { level: n, ordinal: k });
                }
                for &s in list {
                    if s >= below {
                        return Err(Error::MalformedDiagram(format!(
                            "vertex {n}:{k} names source {}:{s}, level has {below} vertices",
                            n - 1
                        )));
                    }
                    fed[s] = true;
                }
            }
            if let Some(orphan) = fed.iter().position(|f| !f) {
                return Err(Error::OrphanVertex { level: n - 1, ordinal: orphan });
            }
            all.push(level_sources);
        }
        let beta = common_arity(&all);
        Ok(Self { labels, sources: all, beta })
    }

    /// Like [`Diagram::new`] with labels `n:k`.
    pub fn unlabeled(level_sizes: &[usize], sources: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let labels = level_sizes
            .iter()
            .enumerate()
            .map(|(n, &size)| (0..size).map(|k| format!("{n}:{k}")).collect())
            .collect();
        Self::new(labels, sources)
    }

    /// The common in-degree when every vertex above level 0 has the same
    /// number (at least 2) of incoming edges.
    pub fn beta(&self) -> Option<usize> {
        self.beta
    }

    pub fn max_level(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn level_size(&self, level: usize) -> usize {
        self.labels[level].len()
    }

    pub fn label(&self, level: usize, ordinal: usize) -> &str {
        &self.labels[level][ordinal]
    }

    pub fn labels(&self, level: usize) -> &[String] {
        &self.labels[level]
    }

    /// Ordered source list of a vertex at level >= 1.
    pub fn sources(&self, level: usize, ordinal: usize) -> &[usize] {
        &self.sources[level][ordinal]
    }

    pub fn in_degree(&self, level: usize, ordinal: usize) -> usize {
        self.sources[level][ordinal].len()
    }

    pub fn multiset(&self, level: usize, ordinal: usize) -> Multiset {
        Multiset::new(self.sources[level][ordinal].clone())
    }

    pub fn ordinal_of(&self, level: usize, label: &str) -> Option<usize> {
        self.labels[level].iter().position(|l| l == label)
    }

    /// Replaces the labels, keeping the structure. Level sizes must match.
    pub fn relabel(&mut self, labels: Vec<Vec<String>>) -> Result<()> {
        let sizes_match = labels.len() == self.labels.len()
            && labels.iter().zip(&self.labels).all(|(a, b)| a.len() == b.len());
        if !sizes_match {
            return Err(Error::MalformedDiagram("relabel changes level sizes".into()));
        }
        self.labels = labels;
        Ok(())
    }

    /// The diagram cut at `level`.
    pub fn truncate(&self, level: usize) -> Self {
        let keep = level.min(self.max_level()) + 1;
        let labels = self.labels[..keep].to_vec();
        let sources = self.sources[..keep].to_vec();
        let beta = common_arity(&sources);
        Self { labels, sources, beta }
    }

    /// Checks the arity condition `|M(v)| = beta` and the ordering-count
    /// condition (no multiset is shared by more vertices than it has distinct
    /// orderings). The report names the first violating vertex in
    /// level-then-ordinal order.
    pub fn check_regular(&self, beta: usize) -> RegularityReport {
        if beta < 2 {
            return RegularityReport::fail(RegularityViolation::BetaTooSmall(beta));
        }
        for n in 1..=self.max_level() {
            let mut sharing: HashMap<Multiset, usize> = HashMap::new();
            for k in 0..self.level_size(n) {
                let vertex = VertexId::new(n, k);
                let size = self.in_degree(n, k);
                if size != beta {
                    return RegularityReport::fail(RegularityViolation::Arity { vertex, size, beta });
                }
                let m = self.multiset(n, k);
                let orderings = m.orderings_count();
                let count = sharing.entry(m.clone()).or_insert(0);
                *count += 1;
                if (*count as u128) > orderings {
                    return RegularityReport::fail(RegularityViolation::OrderingCount {
                        vertex,
                        multiset: m.into_vec(),
                        sharing: *count,
                        orderings,
                    });
                }
            }
        }
        RegularityReport { regular: true, violation: None }
    }

    /// [`Diagram::check_regular`] with the diagram's own arity, failing when
    /// in-degrees vary.
    pub fn check_regular_self(&self) -> RegularityReport {
        match self.beta {
            Some(b) => self.check_regular(b),
            None => {
                // Report the first vertex whose arity differs from 1:0.
                let beta = if self.max_level() == 0 { 0 } else { self.in_degree(1, 0) };
                self.check_regular(beta)
            }
        }
    }

    pub fn is_regular(&self) -> bool {
        self.check_regular_self().regular
    }

    pub(crate) fn require_regular(&self) -> Result<usize> {
        let report = self.check_regular_self();
        match report.violation {
            None => Ok(self.beta.expect("regular diagrams have an arity")),
            Some(v) => Err(Error::NotRegular(v.to_string())),
        }
    }
}

fn common_arity(sources: &[Vec<Vec<usize>>]) -> Option<usize> {
    let mut arity = None;
    for list in sources.iter().skip(1).flatten() {
        match arity {
            None => arity = Some(list.len()),
            Some(a) if a != list.len() => return None,
            _ => {}
        }
    }
    arity.filter(|&a| a >= 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityViolation {
    BetaTooSmall(usize),
    Arity { vertex: VertexId, size: usize, beta: usize },
    OrderingCount { vertex: VertexId, multiset: Vec<usize>, sharing: usize, orderings: u128 },
}

impl RegularityViolation {
    pub fn vertex(&self) -> Option<VertexId> {
        match self {
            Self::BetaTooSmall(_) => None,
            Self::Arity { vertex, .. } | Self::OrderingCount { vertex, .. } => Some(*vertex),
        }
    }
}

impl fmt::Display for RegularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BetaTooSmall(b) => write!(f, "beta must be at least 2, got {b}"),
            Self::Arity { vertex, size, beta } => write!(
                f,
                "arity condition violated at vertex {vertex}: {size} incoming edges, expected {beta}"
            ),
            Self::OrderingCount { vertex, multiset, sharing, orderings } => write!(
                f,
                "ordering-count condition violated at vertex {vertex}: multiset {multiset:?} is shared by {sharing} vertices but has {orderings} orderings"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    pub violation: Option<RegularityViolation>,
}

impl RegularityReport {
    fn fail(v: RegularityViolation) -> Self {
        Self { regular: false, violation: Some(v) }
    }
}

/// Two vertices per level, each fed by both vertices below.
pub fn two_point(max_level: usize) -> Diagram {
    let labels = (0..=max_level)
        .map(|n| vec![format!("v0({n})"), format!("v1({n})")])
        .collect();
    let sources = (1..=max_level).map(|_| vec![vec![0, 1], vec![0, 1]]).collect();
    Diagram::new(labels, sources).expect("two-point diagram is well formed")
}

/// The Pascal-triangle diagram: level n holds `v_0(n), .., v_{n+1}(n)`; the
/// end vertices are fed twice by the end vertex below, interior `v_i(n)` by
/// `v_{i-1}(n-1)` and `v_i(n-1)`.
pub fn pascal(max_level: usize) -> Diagram {
    let labels = (0..=max_level)
        .map(|n| (0..n + 2).map(|i| format!("v{i}({n})")).collect())
        .collect();
    let sources = (1..=max_level)
        .map(|n| {
            (0..n + 2)
                .map(|i| {
                    if i == 0 {
                        vec![0, 0]
                    } else if i == n + 1 {
                        vec![n, n]
                    } else {
                        vec![i - 1, i]
                    }
                })
                .collect()
        })
        .collect();
    Diagram::new(labels, sources).expect("pascal diagram is well formed")
}
