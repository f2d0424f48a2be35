use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{entropy, LevelSource, Pmf, TableSource, PMF_TOLERANCE};
use crate::diagram::{CanonicalDiagram, IndexedLevels};
use crate::error::{Error, Result};

fn check_symbol_pmf(probs: &[f64]) -> Result<()> {
    if probs.len() > 256 {
        return Err(Error::InvalidArgument("alphabets are limited to 256 symbols".into()));
    }
    Pmf::new(0, probs.to_vec()).map(|_| ())
}

fn word_count(alphabet: usize, beta: usize, level: usize, cap: u128) -> Result<u128> {
    let c = CanonicalDiagram::new(vec![String::new(); alphabet], beta, level)?;
    let size = c.level_size(level).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CapExceeded { what: format!("level {level} words"), size, cap });
    }
    Ok(size)
}

fn word_of(alphabet: usize, len: usize, mut ordinal: u128) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for slot in w.iter_mut().rev() {
        *slot = (ordinal % alphabet as u128) as u8;
        ordinal /= alphabet as u128;
    }
    w
}

fn alphabet_labels(size: usize) -> Vec<String> {
    (0..size).map(|s| s.to_string()).collect()
}

/// The product measure of a symbol PMF, embedded in `D_beta(A)`:
/// `mu_n(x) = prod_i p(x_i)` on words of length `beta^n`.
#[derive(Debug, Clone)]
pub struct IidSource {
    probs: Vec<f64>,
    log2p: Vec<f64>,
    beta: usize,
    sampler: WeightedIndex<f64>,
}

impl IidSource {
    pub fn new(probs: Vec<f64>, beta: usize) -> Result<Self> {
        check_symbol_pmf(&probs)?;
        if beta < 2 {
            return Err(Error::InvalidArgument(format!("beta must be at least 2, got {beta}")));
        }
        let log2p = probs.iter().map(|p| p.log2()).collect();
        let sampler = WeightedIndex::new(&probs).map_err(|e| Error::InvalidPmf(e.to_string()))?;
        Ok(Self { probs, log2p, beta, sampler })
    }

    /// Symbol 1 with probability `p`, symbol 0 otherwise.
    pub fn bernoulli(p: f64, beta: usize) -> Result<Self> {
        Self::new(vec![1.0 - p, p], beta)
    }

    pub fn symbol_probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// The explicit table on the realized canonical diagram, levels `0..=up_to`.
    pub fn table(&self, up_to: usize, cap: u128) -> Result<TableSource> {
        let labels = alphabet_labels(self.alphabet_size());
        embed_sequential(&|w| self.word_prob(w), labels, self.beta, up_to, cap)
            .map(|t| t.with_entropy_rate(entropy(&self.probs)))
    }

    fn word_prob(&self, w: &[usize]) -> f64 {
        w.iter().map(|&s| self.probs[s]).product()
    }
}

impl IndexedLevels for IidSource {
    type Vertex = Vec<u8>;

    fn beta(&self) -> usize {
        self.beta
    }

    fn part(&self, _level: usize, x: &Vec<u8>, i: usize) -> Vec<u8> {
        let block = x.len() / self.beta;
        x[i * block..(i + 1) * block].to_vec()
    }
}

impl LevelSource for IidSource {
    fn max_level(&self) -> Option<usize> {
        None
    }

    fn log2_prob(&self, _level: usize, x: &Vec<u8>) -> f64 {
        let mut counts = [0u64; 256];
        for &s in x {
            counts[s as usize] += 1;
        }
        let mut total = 0.0;
        for (s, &c) in counts.iter().enumerate().take(self.probs.len()) {
            if c > 0 {
                total += c as f64 * self.log2p[s];
            }
        }
        total
    }

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<Vec<u8>> {
        let len = self.beta.pow(level as u32);
        Ok((0..len).map(|_| self.sampler.sample(rng) as u8).collect())
    }

    fn entropy_rate(&self) -> Option<f64> {
        Some(entropy(&self.probs))
    }

    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(Vec<u8>, f64)>> {
        let size = word_count(self.alphabet_size(), self.beta, level, cap)?;
        let len = self.beta.pow(level as u32);
        Ok((0..size)
            .map(|k| {
                let w = word_of(self.alphabet_size(), len, k);
                let p = w.iter().map(|&s| self.probs[s as usize]).product();
                (w, p)
            })
            .collect())
    }
}

/// A stationary Markov chain on `A`, embedded in `D_beta(A)`.
#[derive(Debug, Clone)]
pub struct MarkovSource {
    stationary: Vec<f64>,
    transition: Vec<Vec<f64>>,
    beta: usize,
    initial: WeightedIndex<f64>,
    rows: Vec<WeightedIndex<f64>>,
}

impl MarkovSource {
    /// Fails with `NotStationary` unless `stationary * transition = stationary`.
    pub fn new(stationary: Vec<f64>, transition: Vec<Vec<f64>>, beta: usize) -> Result<Self> {
        check_symbol_pmf(&stationary)?;
        let a = stationary.len();
        if transition.len() != a {
            return Err(Error::InvalidArgument("transition matrix must be square over the alphabet".into()));
        }
        for row in &transition {
            if row.len() != a {
                return Err(Error::InvalidArgument("transition matrix must be square over the alphabet".into()));
            }
            check_symbol_pmf(row)?;
        }
        if beta < 2 {
            return Err(Error::InvalidArgument(format!("beta must be at least 2, got {beta}")));
        }
        let mut dev: f64 = 0.0;
        for j in 0..a {
            let pushed: f64 = (0..a).map(|i| stationary[i] * transition[i][j]).sum();
            dev = dev.max((pushed - stationary[j]).abs());
        }
        if dev > PMF_TOLERANCE {
            return Err(Error::NotStationary { level: 0, deviation: dev });
        }
        let wi = |p: &[f64]| WeightedIndex::new(p).map_err(|e| Error::InvalidPmf(e.to_string()));
        let initial = wi(&stationary)?;
        let rows = transition.iter().map(|r| wi(r)).collect::<Result<_>>()?;
        Ok(Self { stationary, transition, beta, initial, rows })
    }

    /// Two states; `a = P(0 -> 1)`, `b = P(1 -> 0)`, started in equilibrium.
    pub fn two_state(a: f64, b: f64, beta: usize) -> Result<Self> {
        if a + b <= 0.0 || (a + b).is_nan() {
            return Err(Error::InvalidArgument("two-state chain needs a + b > 0".into()));
        }
        let pi = vec![b / (a + b), a / (a + b)];
        Self::new(pi, vec![vec![1.0 - a, a], vec![b, 1.0 - b]], beta)
    }

    pub fn word_prob(&self, w: &[usize]) -> f64 {
        match w.first() {
            None => 1.0,
            Some(&s0) => {
                self.stationary[s0] * w.windows(2).map(|p| self.transition[p[0]][p[1]]).product::<f64>()
            }
        }
    }

    pub fn table(&self, up_to: usize, cap: u128) -> Result<TableSource> {
        let labels = alphabet_labels(self.stationary.len());
        let rate = self.entropy_rate().expect("markov rate");
        embed_sequential(&|w| self.word_prob(w), labels, self.beta, up_to, cap).map(|t| t.with_entropy_rate(rate))
    }
}

impl IndexedLevels for MarkovSource {
    type Vertex = Vec<u8>;

    fn beta(&self) -> usize {
        self.beta
    }

    fn part(&self, _level: usize, x: &Vec<u8>, i: usize) -> Vec<u8> {
        let block = x.len() / self.beta;
        x[i * block..(i + 1) * block].to_vec()
    }
}

impl LevelSource for MarkovSource {
    fn max_level(&self) -> Option<usize> {
        None
    }

    fn log2_prob(&self, _level: usize, x: &Vec<u8>) -> f64 {
        let Some(&s0) = x.first() else { return 0.0 };
        let mut lp = self.stationary[s0 as usize].log2();
        for p in x.windows(2) {
            lp += self.transition[p[0] as usize][p[1] as usize].log2();
        }
        lp
    }

    fn sample<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> Result<Vec<u8>> {
        let len = self.beta.pow(level as u32);
        let mut w = Vec::with_capacity(len);
        let mut s = self.initial.sample(rng);
        w.push(s as u8);
        for _ in 1..len {
            s = self.rows[s].sample(rng);
            w.push(s as u8);
        }
        Ok(w)
    }

    fn entropy_rate(&self) -> Option<f64> {
        Some(self.stationary.iter().zip(&self.transition).map(|(p, row)| p * entropy(row)).sum())
    }

    fn enumerate(&self, level: usize, cap: u128) -> Result<Vec<(Vec<u8>, f64)>> {
        let a = self.stationary.len();
        let size = word_count(a, self.beta, level, cap)?;
        let len = self.beta.pow(level as u32);
        Ok((0..size)
            .map(|k| {
                let w = word_of(a, len, k);
                let p = self.log2_prob(level, &w).exp2();
                (w, p)
            })
            .collect())
    }
}

/// Builds the explicit source on `D_beta(A)` whose level-`n` PMF is the
/// marginal of a sequential source on words of length `beta^n`.
///
/// `marginal(w)` is the probability of the word `w` (symbols `0..|A|`). Each
/// level must be a PMF, and summing the level-`n` marginal over all words
/// with a given block in any position must reproduce the level-`(n-1)`
/// marginal; otherwise `NotStationary` names the first offending level.
pub fn embed_sequential(
    marginal: &dyn Fn(&[usize]) -> f64,
    alphabet: Vec<String>,
    beta: usize,
    up_to: usize,
    cap: u128,
) -> Result<TableSource> {
    let canon = CanonicalDiagram::new(alphabet, beta, up_to)?;
    let d = canon.realize(up_to, cap)?;
    let mut levels: Vec<Pmf> = Vec::with_capacity(up_to + 1);
    for n in 0..=up_to {
        let probs: Vec<f64> = (0..d.level_size(n)).map(|k| marginal(&canon.word_of(n, k as u128))).collect();
        let pmf = Pmf::new(n, probs).map_err(|e| match e {
            Error::InvalidPmf(m) => Error::InvalidPmf(format!("level {n}: {m}")),
            other => other,
        })?;
        if n > 0 {
            let below = &levels[n - 1];
            let mut block_sums = vec![vec![0.0; below.len()]; beta];
            for k in 0..d.level_size(n) {
                for (i, &s) in d.sources(n, k).iter().enumerate() {
                    block_sums[i][s] += pmf.get(k);
                }
            }
            let dev = block_sums
                .iter()
                .flat_map(|row| row.iter().zip(below.probs()).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if dev > PMF_TOLERANCE {
                return Err(Error::NotStationary { level: n, deviation: dev });
            }
        }
        levels.push(pmf);
    }
    TableSource::new(d, levels)
}
