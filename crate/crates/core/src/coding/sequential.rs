use super::{Bits, EncoderArray, PrefixCode};
use crate::error::{Error, Result};

/// Codes on `A^k` for every `k >= 1`, induced from codes of orders `m` on the
/// binary canonical diagram `D_2(A)` (words of length `2^m`).
///
/// A string of length `k` is cut into consecutive blocks whose lengths are
/// the powers of two in the binary expansion of `k`, largest first, and each
/// block is sent with the code of the matching order.
#[derive(Debug, Clone)]
pub struct SequentialScheme {
    alphabet: usize,
    codes: Vec<Option<PrefixCode>>,
}

/// Exponents of the powers of two summing to `k`, decreasing.
pub fn binary_blocks(k: usize) -> Vec<usize> {
    (0..usize::BITS as usize).rev().filter(|&m| (k >> m) & 1 == 1).collect()
}

impl SequentialScheme {
    /// `codes[m]` is the order-`m` code, indexed by the lexicographic rank of
    /// the word (first symbol most significant).
    pub fn new(alphabet: usize, codes: Vec<Option<PrefixCode>>) -> Result<Self> {
        for (m, c) in codes.iter().enumerate() {
            if let Some(c) = c {
                let words = (alphabet as u128).checked_pow(1u32 << m);
                if c.level() != m || words != Some(c.len() as u128) {
                    return Err(Error::LevelMismatch { expected: m, found: c.level() });
                }
            }
        }
        Ok(Self { alphabet, codes })
    }

    /// Uses `tau_m` of the array for every order `m <= max_order`. The
    /// array's diagram must be `D_2(A)` realized in lexicographic order.
    pub fn from_array(array: &EncoderArray, alphabet: usize, max_order: usize) -> Result<Self> {
        if array.diagram().beta() != Some(2) {
            return Err(Error::InvalidArgument("sequential induction needs beta = 2".into()));
        }
        let codes = (0..=max_order).map(|m| array.tau(m).map(Some)).collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, codes)
    }

    fn code(&self, m: usize) -> Result<&PrefixCode> {
        self.codes.get(m).and_then(Option::as_ref).ok_or(Error::MissingOrder(m))
    }

    fn rank(&self, block: &[usize]) -> Result<usize> {
        block.iter().try_fold(0usize, |acc, &s| {
            if s >= self.alphabet {
                return Err(Error::OutOfDomain(format!("symbol {s} outside alphabet of size {}", self.alphabet)));
            }
            Ok(acc * self.alphabet + s)
        })
    }

    fn unrank(&self, mut r: usize, len: usize) -> Vec<usize> {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = r % self.alphabet;
            r /= self.alphabet;
        }
        w
    }

    pub fn encode(&self, x: &[usize]) -> Result<Bits> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("sequential codes start at k = 1".into()));
        }
        let mut out = Vec::new();
        let mut pos = 0;
        for m in binary_blocks(x.len()) {
            let len = 1usize << m;
            let code = self.code(m)?;
            out.extend_from_slice(code.encode(self.rank(&x[pos..pos + len])?)?);
            pos += len;
        }
        Ok(out)
    }

    /// Decodes exactly one length-`k` string.
    pub fn decode(&self, k: usize, bits: &[bool]) -> Result<Vec<usize>> {
        let (out, pos) = self.decode_prefix(k, bits, 0)?;
        if pos != bits.len() {
            return Err(Error::InvalidCodeword);
        }
        Ok(out)
    }

    /// Decodes one length-`k` string starting at bit `pos`; returns it with
    /// the position just past its codeword.
    pub fn decode_prefix(&self, k: usize, bits: &[bool], mut pos: usize) -> Result<(Vec<usize>, usize)> {
        let mut out = Vec::with_capacity(k);
        for m in binary_blocks(k) {
            let (v, next) = self.code(m)?.decode_prefix(bits, pos)?;
            out.extend(self.unrank(v, 1 << m));
            pos = next;
        }
        Ok((out, pos))
    }

    /// Codeword length of `x`.
    pub fn length(&self, x: &[usize]) -> Result<usize> {
        Ok(self.encode(x)?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{canonical_code, lift, DEFAULT_LEVEL_CAP};
    use crate::diagram::{CanonicalDiagram, Indexing};
    use crate::rng;
    use rand::Rng;
    use std::sync::Arc;

    fn scheme() -> SequentialScheme {
        let d = CanonicalDiagram::from_chars("ab", 2, 2).unwrap().realize(2, 1 << 10).unwrap();
        let idx = Indexing::lex(&d).unwrap();
        let phi0 = canonical_code(0, &[1, 1]).unwrap();
        let phi1 = canonical_code(1, &[1, 2, 3, 3]).unwrap();
        let phi2 = lift(&phi1, &d, &idx).unwrap();
        SequentialScheme::new(2, vec![Some(phi0), Some(phi1), Some(phi2)]).unwrap()
    }

    #[test]
    fn block_decomposition() {
        assert_eq!(binary_blocks(4), vec![2]);
        assert_eq!(binary_blocks(5), vec![2, 0]);
        assert_eq!(binary_blocks(7), vec![2, 1, 0]);
    }

    #[test]
    fn k4_uses_order_two_on_the_whole_block() {
        let s = scheme();
        let x = [0, 1, 1, 0];
        let phi2 = s.code(2).unwrap();
        assert_eq!(s.encode(&x).unwrap(), phi2.word(0b0110));
    }

    #[test]
    fn k5_and_k7_concatenate_factors() {
        let s = scheme();
        let x = [1, 0, 0, 0, 1];
        let mut expected = s.code(2).unwrap().word(0b1000).to_vec();
        expected.extend_from_slice(s.code(0).unwrap().word(1));
        assert_eq!(s.encode(&x).unwrap(), expected);
        let y = [0, 0, 0, 0, 1, 1, 0];
        let lens = s.code(2).unwrap().word(0).len() + s.code(1).unwrap().word(3).len() + 1;
        assert_eq!(s.length(&y).unwrap(), lens);
    }

    #[test]
    fn missing_order_is_reported() {
        let s = scheme();
        assert_eq!(s.encode(&[0; 8]).unwrap_err(), Error::MissingOrder(3));
    }

    #[test]
    fn randomized_roundtrip() {
        let s = scheme();
        let mut r = rng::seeded(11);
        for k in 1..=7 {
            for _ in 0..200 {
                let x: Vec<usize> = (0..k).map(|_| r.random_range(0..2)).collect();
                let bits = s.encode(&x).unwrap();
                assert_eq!(s.decode(k, &bits).unwrap(), x);
            }
        }
    }

    #[test]
    fn from_array_roundtrips() {
        let d = Arc::new(CanonicalDiagram::from_chars("ab", 2, 3).unwrap().realize(3, 1 << 10).unwrap());
        let arr = EncoderArray::build(d, DEFAULT_LEVEL_CAP, None).unwrap();
        let s = SequentialScheme::from_array(&arr, 2, 3).unwrap();
        let mut r = rng::seeded(12);
        for _ in 0..100 {
            let x: Vec<usize> = (0..13).map(|_| r.random_range(0..2)).collect();
            assert_eq!(s.decode(13, &s.encode(&x).unwrap()).unwrap(), x);
        }
    }
}
