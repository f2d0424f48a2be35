use super::{Diagram, IndexedLevels, Indexing};
use crate::error::{Error, Result};

/// Default cap on the number of vertices materialized for one level.
pub const DEFAULT_LEVEL_CAP: u128 = 1 << 20;

/// The strings `eta(v)` over level-0 ordinals for every vertex up to some level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalImage {
    symbols: Vec<String>,
    // words[n][k] = eta(n:k) as level-0 ordinals.
    words: Vec<Vec<Vec<usize>>>,
}

impl CanonicalImage {
    pub fn max_level(&self) -> usize {
        self.words.len() - 1
    }

    pub fn word(&self, level: usize, ordinal: usize) -> &[usize] {
        &self.words[level][ordinal]
    }

    pub fn render(&self, level: usize, ordinal: usize) -> String {
        render_word(&self.symbols, &self.words[level][ordinal])
    }
}

/// Joins symbol labels; single-character alphabets are concatenated, longer
/// labels are separated by spaces.
pub(crate) fn render_word(symbols: &[String], word: &[usize]) -> String {
    let sep = if symbols.iter().all(|s| s.chars().count() == 1) { "" } else { " " };
    word.iter().map(|&s| symbols[s].as_str()).collect::<Vec<_>>().join(sep)
}

/// Maps every vertex up to `up_to` to its level-0 string under `indexing` and
/// returns those strings together with the isomorphic canonical diagram
/// (vertices labeled by their strings, sources in decomposition order).
///
/// `cap` bounds the number of symbols stored for the top level.
pub fn canonicalize(
    d: &Diagram,
    indexing: &Indexing,
    up_to: usize,
    cap: u128,
) -> Result<(CanonicalImage, Diagram)> {
    let beta = d.require_regular()?;
    indexing.validate(d)?;
    if up_to > d.max_level() {
        return Err(Error::LevelMismatch { expected: d.max_level(), found: up_to });
    }
    let top_symbols = (beta as u128)
        .checked_pow(up_to as u32)
        .and_then(|w| w.checked_mul(d.level_size(up_to) as u128))
        .unwrap_or(u128::MAX);
    if top_symbols > cap {
        return Err(Error::CapExceeded { what: format!("level {up_to} strings"), size: top_symbols, cap });
    }
    let mut words: Vec<Vec<Vec<usize>>> = vec![(0..d.level_size(0)).map(|k| vec![k]).collect()];
    for n in 1..=up_to {
        let level = (0..d.level_size(n))
            .map(|k| indexing.tuple(n, k).iter().flat_map(|&s| words[n - 1][s].iter().copied()).collect())
            .collect();
        words.push(level);
    }
    let symbols = d.labels(0).to_vec();
    let labels = words
        .iter()
        .map(|level| level.iter().map(|w| render_word(&symbols, w)).collect())
        .collect();
    let sources = (1..=up_to)
        .map(|n| (0..d.level_size(n)).map(|k| indexing.tuple(n, k).to_vec()).collect())
        .collect();
    let image_diagram = Diagram::new(labels, sources)?;
    Ok((CanonicalImage { symbols, words }, image_diagram))
}

/// The β-canonical diagram `D_β(A)` described lazily: level `n` is the set of
/// words of length `β^n` over `A`, ordered lexicographically, and each word's
/// sources are its `β` equal-length blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalDiagram {
    alphabet: Vec<String>,
    beta: usize,
    max_level: usize,
}

impl CanonicalDiagram {
    pub fn new(alphabet: Vec<String>, beta: usize, max_level: usize) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyLevel(0));
        }
        if beta < 2 {
            return Err(Error::InvalidArgument(format!("beta must be at least 2, got {beta}")));
        }
        Ok(Self { alphabet, beta, max_level })
    }

    /// Alphabet from the characters of a string.
    pub fn from_chars(alphabet: &str, beta: usize, max_level: usize) -> Result<Self> {
        Self::new(alphabet.chars().map(String::from).collect(), beta, max_level)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn word_len(&self, level: usize) -> Option<usize> {
        self.beta.checked_pow(level as u32)
    }

    /// `|A|^(β^n)`, or `None` when it does not fit in a `u128`.
    pub fn level_size(&self, level: usize) -> Option<u128> {
        let len = u32::try_from(self.word_len(level)?).ok()?;
        (self.alphabet.len() as u128).checked_pow(len)
    }

    /// Lexicographic rank of a word (first symbol most significant).
    pub fn ordinal_of(&self, word: &[usize]) -> u128 {
        let a = self.alphabet.len() as u128;
        word.iter().fold(0u128, |acc, &s| acc * a + s as u128)
    }

    pub fn word_of(&self, level: usize, ordinal: u128) -> Vec<usize> {
        let len = self.word_len(level).expect("word length fits in usize");
        let a = self.alphabet.len() as u128;
        let mut word = vec![0; len];
        let mut r = ordinal;
        for slot in word.iter_mut().rev() {
            *slot = (r % a) as usize;
            r /= a;
        }
        word
    }

    pub fn render(&self, word: &[usize]) -> String {
        render_word(&self.alphabet, word)
    }

    /// Materializes levels `0..=up_to`; fails if any level exceeds `cap` vertices.
    pub fn realize(&self, up_to: usize, cap: u128) -> Result<Diagram> {
        let up_to = up_to.min(self.max_level);
        let mut sizes = Vec::with_capacity(up_to + 1);
        for n in 0..=up_to {
            let size = self.level_size(n).unwrap_or(u128::MAX);
            if size > cap {
                return Err(Error::CapExceeded { what: format!("canonical level {n}"), size, cap });
            }
            sizes.push(size as usize);
        }
        let mut labels = Vec::with_capacity(up_to + 1);
        let mut sources = Vec::with_capacity(up_to);
        for (n, &size) in sizes.iter().enumerate() {
            let mut level_labels = Vec::with_capacity(size);
            let mut level_sources = Vec::with_capacity(size);
            for k in 0..size {
                let word = self.word_of(n, k as u128);
                level_labels.push(self.render(&word));
                if n > 0 {
                    let block = word.len() / self.beta;
                    level_sources.push(word.chunks(block).map(|c| self.ordinal_of(c) as usize).collect());
                }
            }
            labels.push(level_labels);
            if n > 0 {
                sources.push(level_sources);
            }
        }
        Diagram::new(labels, sources)
    }
}

/// Words of `D_β(A)` as raw symbol vectors, decomposed into `β` equal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalWords {
    pub beta: usize,
}

impl IndexedLevels for CanonicalWords {
    type Vertex = Vec<u8>;

    fn beta(&self) -> usize {
        self.beta
    }

    fn part(&self, _level: usize, x: &Vec<u8>, i: usize) -> Vec<u8> {
        let block = x.len() / self.beta;
        x[i * block..(i + 1) * block].to_vec()
    }

    fn eta(&self, _level: usize, x: &Vec<u8>) -> Vec<Vec<u8>> {
        x.iter().map(|&s| vec![s]).collect()
    }
}
