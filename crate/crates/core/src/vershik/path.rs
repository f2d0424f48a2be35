use rand::Rng;

use super::adic::{add_one, address_to_index, beta_expand, sub_one, AdicAddress};
use crate::diagram::IndexedLevels;
use crate::error::{Error, Result};
use crate::source::LevelSource;

/// A path from level 0 to a vertex of level `n >= 1`, stored as its
/// terminal vertex and address. Lower vertices come from the descent
/// `X_j = X_{j+1}[z_j]`.
///
/// The same type stands for the level-`n` truncation of an infinite path;
/// [`FinitePath::vershik_apply`] then reports [`Error::TruncationTooShallow`]
/// where [`FinitePath::step`] reports [`Error::FinalPath`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePath<V> {
    top: V,
    address: AdicAddress,
}

impl<V: Clone> FinitePath<V> {
    /// The path `y[a, x]` for `x` at level `a.len()`.
    pub fn from_address<S: IndexedLevels<Vertex = V>>(s: &S, x: V, address: AdicAddress) -> Result<Self> {
        if address.beta() != s.beta() {
            return Err(Error::Mismatch);
        }
        Ok(Self { top: x, address })
    }

    /// The path `y(i, x)` for `x` at level `n`.
    pub fn from_index<S: IndexedLevels<Vertex = V>>(s: &S, n: usize, x: V, i: u128) -> Result<Self> {
        Self::from_address(s, x, beta_expand(i, s.beta(), n)?)
    }

    pub fn initial<S: IndexedLevels<Vertex = V>>(s: &S, n: usize, x: V) -> Result<Self> {
        Self::from_index(s, n, x, 0)
    }

    pub fn level(&self) -> usize {
        self.address.len()
    }

    pub fn top(&self) -> &V {
        &self.top
    }

    pub fn address(&self) -> &AdicAddress {
        &self.address
    }

    pub fn index(&self) -> u128 {
        address_to_index(&self.address)
    }

    pub fn is_final(&self) -> bool {
        self.address.is_final()
    }

    pub fn n_omega(&self) -> Option<usize> {
        self.address.n_omega()
    }

    /// The vertex `X_j` of the path, `0 <= j <= n`.
    pub fn vertex_at<S: IndexedLevels<Vertex = V>>(&self, s: &S, j: usize) -> V {
        let mut x = self.top.clone();
        for level in (j..self.level()).rev() {
            x = s.part(level + 1, &x, self.address.digit(level));
        }
        x
    }

    /// `X_0, .., X_n`.
    pub fn chain<S: IndexedLevels<Vertex = V>>(&self, s: &S) -> Vec<V> {
        let n = self.level();
        let mut out = vec![self.top.clone(); n + 1];
        for j in (0..n).rev() {
            out[j] = s.part(j + 1, &out[j + 1], self.address.digit(j));
        }
        out
    }

    /// `T_n`: same terminal vertex, index plus one.
    pub fn step(&self) -> Result<Self> {
        let address = add_one(&self.address).map_err(|_| Error::FinalPath)?;
        Ok(Self { top: self.top.clone(), address })
    }

    /// `T_n^{-1}`; fails on the initial path.
    pub fn step_back(&self) -> Result<Self> {
        let address = sub_one(&self.address).map_err(|_| Error::FinalPath)?;
        Ok(Self { top: self.top.clone(), address })
    }

    /// The Vershik map on the truncation. It only changes the first
    /// `N(omega)` edges, so it is defined whenever `N(omega) <= n`.
    pub fn vershik_apply(&self) -> Result<Self> {
        self.step().map_err(|_| Error::TruncationTooShallow)
    }

    /// The Vershik map for the reversed embedding `beta - 1 - I`, which
    /// inverts [`FinitePath::vershik_apply`].
    pub fn vershik_inverse(&self) -> Result<Self> {
        self.step_back().map_err(|_| Error::TruncationTooShallow)
    }

    /// The level-`m` truncation, `1 <= m <= n`.
    pub fn truncate<S: IndexedLevels<Vertex = V>>(&self, s: &S, m: usize) -> Result<Self> {
        let address = self.address.prefix(m)?;
        Ok(Self { top: self.vertex_at(s, m), address })
    }
}

/// A path drawn under `P_mu` with its vertex chain cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample<V> {
    pub path: FinitePath<V>,
    pub chain: Vec<V>,
}

impl<V: Clone + PartialEq> PathSample<V> {
    pub fn new<S: IndexedLevels<Vertex = V>>(s: &S, path: FinitePath<V>) -> Self {
        let chain = path.chain(s);
        Self { path, chain }
    }

    pub fn level(&self) -> usize {
        self.path.level()
    }

    /// Whether `X_{j-1} = X_j[z_{j-1}]` for every `j`.
    pub fn descent_holds<S: IndexedLevels<Vertex = V>>(&self, s: &S) -> bool {
        (1..self.chain.len()).all(|j| s.part(j, &self.chain[j], self.path.address().digit(j - 1)) == self.chain[j - 1])
    }
}

/// Draws the level-`n` truncation of a `P_mu` path: `X_n ~ mu_n` and an
/// independent uniform address.
pub fn sample_path<S: LevelSource, R: Rng + ?Sized>(s: &S, n: usize, rng: &mut R) -> Result<PathSample<S::Vertex>> {
    if n == 0 {
        return Err(Error::InvalidArgument("paths have at least one edge".into()));
    }
    if s.max_level().is_some_and(|m| m < n) {
        return Err(Error::NoSampler(n));
    }
    let x = s.sample(n, rng)?;
    let beta = s.beta();
    let digits = (0..n).map(|_| rng.random_range(0..beta)).collect();
    let path = FinitePath::from_address(s, x, AdicAddress::new(beta, digits)?)?;
    Ok(PathSample::new(s, path))
}
