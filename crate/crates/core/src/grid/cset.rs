//! The `tau^theta` family: on the canonical diagram whose level-`n` vertices
//! are the sets `C_n(x)` of corner strings averaging to grid vertex `x`,
//! `tau^theta` spreads the barycentric mass of `x` uniformly over `C_n(x)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use super::kuhn::{point_label, GridPoint, KuhnGrid};
use crate::diagram::{multinomial, next_permutation, Diagram, IndexedLevels};
use crate::error::{Error, Result};
use crate::source::{entropy, LevelSource, Pmf, TableSource};

/// Sizes above this many bits are kept only as `log2`.
pub const EXACT_BITS: u64 = 512;

/// `|C_n(x)|`, exactly while it fits in [`EXACT_BITS`] bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CSize {
    pub exact: Option<BigUint>,
    pub log2: f64,
}

pub(crate) fn log2_big(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 64;
    (b >> shift).to_f64().expect("64 bits").log2() + shift as f64
}

/// Memoized `|C_n(x)|` for one grid. Safe to share between threads; values
/// are write-once.
#[derive(Debug)]
pub struct CSetTable {
    grid: KuhnGrid,
    memo: Mutex<HashMap<(usize, GridPoint), Arc<CSize>>>,
}

impl CSetTable {
    pub fn new(grid: KuhnGrid) -> Self {
        Self { grid, memo: Mutex::new(HashMap::new()) }
    }

    pub fn grid(&self) -> &KuhnGrid {
        &self.grid
    }

    /// `|C_n(x)| = N(M(x)) * prod_i |C_{n-1}(x_i)|`: every ordering in `S(x)`
    /// contributes the same product.
    pub fn size(&self, n: usize, x: &[u64]) -> Result<Arc<CSize>> {
        let key = (n, x.to_vec());
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let value = if n == 0 {
            CSize { exact: Some(BigUint::one()), log2: 0.0 }
        } else {
            let m = self.grid.multiset_m(x, n)?;
            let orderings = multinomial(m.iter().map(|(_, c)| *c));
            let mut log2 = (orderings as f64).log2();
            let mut exact = Some(BigUint::from(orderings));
            for (child, mult) in &m {
                let c = self.size(n - 1, child)?;
                log2 += *mult as f64 * c.log2;
                exact = match (exact, &c.exact) {
                    (Some(acc), Some(ce)) => Some(acc * ce.pow(*mult as u32)),
                    _ => None,
                };
            }
            let exact = exact.filter(|e| e.bits() <= EXACT_BITS);
            if let Some(e) = &exact {
                log2 = log2_big(e);
            }
            CSize { exact, log2 }
        };
        let value = Arc::new(value);
        self.memo.lock().expect("memo lock").insert(key, value.clone());
        Ok(value)
    }

    pub fn log2_size(&self, n: usize, x: &[u64]) -> Result<f64> {
        Ok(self.size(n, x)?.log2)
    }

    /// `H_n(theta) = beta^-n [H(p) + sum_x p(x) log2 |C_n(x)|]` with `p` the
    /// barycentric distribution of `theta` in `K_n`.
    pub fn approximant(&self, theta: &[f64], n: usize) -> Result<f64> {
        let dist = self.grid.barycentric(theta, n)?;
        let mut h = dist.entropy();
        for (x, p) in &dist.support {
            h += p * self.log2_size(n, x)?;
        }
        Ok(h / (self.grid.beta() as f64).powi(n as i32))
    }

    /// Every element of `C_n(x)` as a token, in lexicographic order of the
    /// orderings chosen at each node.
    pub fn enumerate(&self, n: usize, x: &[u64], cap: u128) -> Result<Vec<Token>> {
        let size = self.size(n, x)?;
        let count = size.exact.as_ref().and_then(|e| e.to_u128()).unwrap_or(u128::MAX);
        if count > cap {
            return Err(Error::CapExceeded { what: format!("C_{n}({x:?})"), size: count, cap });
        }
        if n == 0 {
            return Ok(vec![Token::leaf(x.to_vec())]);
        }
        let mut children: Vec<GridPoint> = Vec::with_capacity(self.grid.beta());
        for (v, m) in self.grid.multiset_m(x, n)? {
            children.extend(std::iter::repeat(v).take(m));
        }
        children.sort();
        let mut sub: HashMap<GridPoint, Vec<Token>> = HashMap::new();
        for c in &children {
            if !sub.contains_key(c) {
                sub.insert(c.clone(), self.enumerate(n - 1, c, cap)?);
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        loop {
            let lists: Vec<&Vec<Token>> = children.iter().map(|c| &sub[c]).collect();
            let mut idx = vec![0usize; lists.len()];
            'product: loop {
                out.push(Token {
                    point: x.to_vec(),
                    children: idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect(),
                });
                let mut pos = idx.len();
                loop {
                    if pos == 0 {
                        break 'product;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
            if !next_permutation(&mut children) {
                break;
            }
        }
        Ok(out)
    }

    /// A uniform element of `C_n(x)`: a uniformly random distinct ordering of
    /// `M(x)` at every node.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, n: usize, x: &[u64], rng: &mut R) -> Result<Token> {
        if n == 0 {
            return Ok(Token::leaf(x.to_vec()));
        }
        let mut children: Vec<GridPoint> = Vec::with_capacity(self.grid.beta());
        for (v, m) in self.grid.multiset_m(x, n)? {
            children.extend(std::iter::repeat(v).take(m));
        }
        children.shuffle(rng);
        let children = children.iter().map(|c| self.sample_uniform(n - 1, c, rng)).collect::<Result<_>>()?;
        Ok(Token { point: x.to_vec(), children })
    }

    /// Whether `t` is an element of `C_n(t.point)` of depth `n`.
    pub fn is_member(&self, n: usize, t: &Token) -> bool {
        if n == 0 {
            return t.children.is_empty() && t.point.iter().all(|&c| c <= 1) && t.point.len() == self.grid.dim();
        }
        if t.children.len() != self.grid.beta() {
            return false;
        }
        let Ok(m) = self.grid.multiset_m(&t.point, n) else { return false };
        let mut expected: Vec<&GridPoint> = m.iter().flat_map(|(v, c)| std::iter::repeat(v).take(*c)).collect();
        let mut got: Vec<&GridPoint> = t.children.iter().map(|c| &c.point).collect();
        expected.sort();
        got.sort();
        expected == got && t.children.iter().all(|c| self.is_member(n - 1, c))
    }
}

/// An element of `C_n(x)`: the grid vertex `x` together with one element of
/// `C_{n-1}` for each entry of the chosen ordering of `M(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub point: GridPoint,
    pub children: Vec<Token>,
}

impl Token {
    pub fn leaf(point: GridPoint) -> Self {
        Self { point, children: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.children.first().map_or(0, |c| c.depth() + 1)
    }

    /// The corner string: level-0 points left to right.
    pub fn leaves(&self) -> Vec<GridPoint> {
        if self.children.is_empty() {
            return vec![self.point.clone()];
        }
        self.children.iter().flat_map(Token::leaves).collect()
    }

    /// Corners written as `0/1` digits for `k = 1`, tuples otherwise.
    pub fn render(&self) -> String {
        let leaves = self.leaves();
        if leaves.iter().all(|p| p.len() == 1) {
            leaves.iter().map(|p| p[0].to_string()).collect()
        } else {
            leaves.iter().map(|p| point_label(p, 1)).collect::<Vec<_>>().join(" ")
        }
    }
}

/// The source `tau^theta` with tokens as vertices.
#[derive(Debug, Clone)]
pub struct TauTheta {
    table: Arc<CSetTable>,
    theta: Vec<f64>,
}

impl TauTheta {
    pub fn new(grid: KuhnGrid, theta: Vec<f64>) -> Result<Self> {
        Self::with_table(Arc::new(CSetTable::new(grid)), theta)
    }

    /// Shares a size memo with other members of the family.
    pub fn with_table(table: Arc<CSetTable>, theta: Vec<f64>) -> Result<Self> {
        table.grid().barycentric(&theta, 0)?;
        Ok(Self { table, theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn table(&self) -> &CSetTable {
        &self.table
    }

    /// `beta^-n H(tau^theta_n)`.
    pub fn approximant(&self, n: usize) -> Result<f64> {
        self.table.approximant(&self.theta, n)
    }
}

impl IndexedLevels for TauTheta {
    type Vertex = Token;

    fn beta(&self) -> usize {
        self.table.grid().beta()
    }

    fn part(&self, _level: usize, x: &Token, i: usize) -> Token {
        x.children[i].clone()
    }
}

impl LevelSource for TauTheta {
    fn max_level(&self) -> Option<usize> {
        None
    }

    fn log2_prob(&self, level: usize, x: &Token) -> f64 {
        if !self.table.is_member(level, x) {
            return f64::NEG_INFINITY;
        }
        let Ok(dist) = self.table.grid().barycentric(&self.theta, level) else { return f64::NEG_INFINITY };
        let p = dist.support.iter().find(|(v, _)| *v == x.point).map_or(0.0, |(_, w)| *w);
        match self.table.log2_size(level, &x.point) {
            Ok(c) if p > 0.0 => p.log2() - c,
            _ => f64::NEG_INFINITY,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<Token> {
        let dist = self.table.grid().barycentric(&self.theta, level)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = &dist.support[dist.support.len() - 1].0;
        for (v, w) in &dist.support {
            acc += w;
            if u < acc {
                pick = v;
                break;
            }
        }
        self.table.sample_uniform(level, pick, rng)
    }

    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(Token, f64)>> {
        let dist = self.table.grid().barycentric(&self.theta, level)?;
        let mut out = Vec::new();
        for (x, p) in &dist.support {
            let tokens = self.table.enumerate(level, x, cap)?;
            let q = p / tokens.len() as f64;
            out.extend(tokens.into_iter().map(|t| (t, q)));
            if out.len() as u128 > cap {
                return Err(Error::CapExceeded { what: format!("level {level}"), size: out.len() as u128, cap });
            }
        }
        Ok(out)
    }
}

/// `(theta, H_n(theta))` for each `theta`, sharing one size memo.
pub fn entropy_curve(grid: KuhnGrid, thetas: &[Vec<f64>], n: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let table = CSetTable::new(grid);
    thetas.iter().map(|t| table.approximant(t, n).map(|h| (t.clone(), h))).collect()
}

/// The explicit canonical diagram with `V_n` the union of the `C_n(x)`,
/// levels `0..=max_level`, together with its tokens. Vertices are ordered by
/// grid vertex, then by enumeration order within `C_n(x)`.
pub fn cset_diagram(grid: KuhnGrid, max_level: usize, cap: u128) -> Result<(Diagram, Vec<Vec<Token>>)> {
    let table = CSetTable::new(grid);
    let mut tokens: Vec<Vec<Token>> = Vec::with_capacity(max_level + 1);
    let mut labels = Vec::with_capacity(max_level + 1);
    let mut sources = Vec::with_capacity(max_level);
    for n in 0..=max_level {
        let size = grid.level_size(n).unwrap_or(u128::MAX);
        let mut level = Vec::new();
        for ord in 0..size {
            let x = grid.vertex(n, ord);
            level.extend(table.enumerate(n, &x, cap)?);
            if level.len() as u128 > cap {
                return Err(Error::CapExceeded { what: format!("C-set level {n}"), size: level.len() as u128, cap });
            }
        }
        labels.push(level.iter().map(Token::render).collect::<Vec<_>>());
        if n > 0 {
            let index: HashMap<&Token, usize> = tokens[n - 1].iter().enumerate().map(|(i, t)| (t, i)).collect();
            sources.push(level.iter().map(|t| t.children.iter().map(|c| index[c]).collect()).collect::<Vec<Vec<usize>>>());
        }
        tokens.push(level);
    }
    Ok((Diagram::new(labels, sources)?, tokens))
}

/// `tau^theta` as an explicit source on [`cset_diagram`].
pub fn tau_theta_table(grid: KuhnGrid, theta: &[f64], max_level: usize, cap: u128) -> Result<TableSource> {
    let (d, tokens) = cset_diagram(grid, max_level, cap)?;
    let table = CSetTable::new(grid);
    let mut levels = Vec::with_capacity(max_level + 1);
    for (n, level) in tokens.iter().enumerate() {
        let dist = grid.barycentric(theta, n)?;
        let mass: HashMap<&GridPoint, f64> = dist.support.iter().map(|(v, w)| (v, *w)).collect();
        let probs = level
            .iter()
            .map(|t| {
                let p = mass.get(&t.point).copied().unwrap_or(0.0);
                Ok(if p > 0.0 { p / table.size(n, &t.point)?.log2.exp2() } else { 0.0 })
            })
            .collect::<Result<Vec<f64>>>()?;
        levels.push(Pmf::new(n, probs)?);
    }
    let source = TableSource::new(d, levels)?;
    let idx = crate::diagram::Indexing::from_source_order(source.diagram())?;
    source.with_indexing(idx)
}

/// Shannon entropy of `tau^theta_n` computed by enumeration, for tests.
pub fn enumerated_entropy(source: &TauTheta, n: usize, cap: u128) -> Result<f64> {
    let probs: Vec<f64> = source.enumerate(n, cap)?.into_iter().map(|(_, p)| p).collect();
    Ok(entropy(&probs))
}
