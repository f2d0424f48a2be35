use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// A binary string, most significant (first transmitted) bit first.
pub type Bits = Vec<bool>;

pub fn bits_from_str(s: &str) -> Result<Bits> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bit string contains {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// `width`-bit big-endian binary form of `value`.
pub fn int_to_bits(value: usize, width: usize) -> Bits {
    (0..width).rev().map(|i| (value >> i) & 1 == 1).collect()
}

pub fn bits_to_int(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// `numer / 2^exp`, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    numer: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn new(numer: BigUint, exp: u32) -> Self {
        let mut d = Self { numer, exp };
        let tz = d.numer.trailing_zeros().unwrap_or(u64::from(d.exp)).min(u64::from(d.exp)) as u32;
        d.numer >>= tz;
        d.exp -= tz;
        d
    }

    pub fn numer(&self) -> &BigUint {
        &self.numer
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.numer == BigUint::from(1u32)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.numer.bits();
        let shift = bits.saturating_sub(60);
        let top = (&self.numer >> shift).iter_u64_digits().next().unwrap_or(0);
        top as f64 * 2f64.powi(shift as i32 - self.exp as i32)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/2^{}", self.numer, self.exp)
        }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Inner([u32; 2]),
    Leaf(usize),
}

/// A one-to-one prefix-free map from the vertices (ordinals) of one level to
/// binary strings. The level is the code's order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    level: usize,
    words: Vec<Bits>,
    trie: Vec<Node>,
}

impl PrefixCode {
    /// Fails unless the words are distinct and no word is a prefix of another.
    pub fn new(level: usize, words: Vec<Bits>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidArgument("a code needs at least one codeword".into()));
        }
        let trie = build_trie(&words)?;
        Ok(Self { level, words, trie })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, v: usize) -> &[bool] {
        &self.words[v]
    }

    pub fn words(&self) -> &[Bits] {
        &self.words
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(Vec::len).collect()
    }

    pub fn encode(&self, v: usize) -> Result<&[bool]> {
        self.words.get(v).map(Vec::as_slice).ok_or(Error::OutOfDomain(format!("vertex {v}")))
    }

    /// Exact `sum 2^-|w|`.
    pub fn kraft_sum(&self) -> Dyadic {
        let max = self.words.iter().map(Vec::len).max().unwrap_or(0);
        let mut numer = BigUint::from(0u32);
        for w in &self.words {
            numer += BigUint::from(1u32) << (max - w.len());
        }
        Dyadic::new(numer, max as u32)
    }

    /// Kraft sum exactly one.
    pub fn is_proper(&self) -> bool {
        self.kraft_sum().is_one()
    }

    /// Decodes one codeword starting at `pos`; returns the vertex and the
    /// position just past the codeword.
    pub fn decode_prefix(&self, bits: &[bool], pos: usize) -> Result<(usize, usize)> {
        let mut node = 0u32;
        let mut i = pos;
        loop {
            match self.trie[node as usize] {
                Node::Leaf(v) => return Ok((v, i)),
                Node::Inner(children) => {
                    let Some(&b) = bits.get(i) else { return Err(Error::TruncatedInput) };
                    let next = children[b as usize];
                    if next == NONE {
                        return Err(Error::InvalidCodeword);
                    }
                    node = next;
                    i += 1;
                }
            }
        }
    }

    /// Decodes a string that must be exactly one codeword.
    pub fn decode(&self, bits: &[bool]) -> Result<usize> {
        let (v, end) = self.decode_prefix(bits, 0)?;
        if end != bits.len() {
            return Err(Error::InvalidCodeword);
        }
        Ok(v)
    }

    /// Decodes a concatenation of codewords.
    pub fn decode_all(&self, bits: &[bool]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < bits.len() {
            let (v, next) = self.decode_prefix(bits, pos)?;
            if next == pos {
                // Only the single-vertex empty code can consume nothing.
                return Err(Error::InvalidCodeword);
            }
            out.push(v);
            pos = next;
        }
        Ok(out)
    }
}

fn build_trie(words: &[Bits]) -> Result<Vec<Node>> {
    let not_prefix_free = |v: usize| Error::InvalidArgument(format!("codeword of vertex {v} collides with another codeword"));
    let mut trie = vec![Node::Inner([NONE, NONE])];
    for (v, w) in words.iter().enumerate() {
        let mut node = 0usize;
        for &b in w {
            let Node::Inner(children) = trie[node] else { return Err(not_prefix_free(v)) };
            let next = children[b as usize];
            node = if next == NONE {
                let id = trie.len() as u32;
                trie.push(Node::Inner([NONE, NONE]));
                if let Node::Inner(c) = &mut trie[node] {
                    c[b as usize] = id;
                }
                id as usize
            } else {
                next as usize
            };
        }
        match trie[node] {
            Node::Inner([NONE, NONE]) => trie[node] = Node::Leaf(v),
            _ => return Err(not_prefix_free(v)),
        }
    }
    Ok(trie)
}
