use super::{int_to_bits, Bits, PrefixCode};
use crate::diagram::{Diagram, Indexing};
use crate::error::{Error, Result};
use crate::source::{entropy, Pmf};

/// The canonical code with the given lengths: vertices sorted by
/// (length, ordinal) receive consecutive binary values.
pub fn canonical_code(level: usize, lengths: &[usize]) -> Result<PrefixCode> {
    if lengths.len() == 1 && lengths[0] == 0 {
        return PrefixCode::new(level, vec![Vec::new()]);
    }
    if lengths.iter().any(|&l| l == 0 || l > 127) {
        return Err(Error::InvalidArgument("canonical lengths must lie in 1..=127".into()));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&v| (lengths[v], v));
    let mut words = vec![Vec::new(); lengths.len()];
    let mut value: u128 = 0;
    let mut prev_len = lengths[order[0]];
    for (rank, &v) in order.iter().enumerate() {
        let len = lengths[v];
        if rank > 0 {
            value = (value + 1) << (len - prev_len);
        }
        if len < 128 && value >> len != 0 {
            return Err(Error::InvalidArgument("lengths violate the Kraft inequality".into()));
        }
        words[v] = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        prev_len = len;
    }
    PrefixCode::new(level, words)
}

/// Flips the first bit of every codeword (swaps the root's subtrees).
pub fn root_complement(code: &PrefixCode) -> Result<PrefixCode> {
    let words = code
        .words()
        .iter()
        .map(|w| {
            let mut w = w.clone();
            if let Some(b) = w.first_mut() {
                *b = !*b;
            }
            w
        })
        .collect();
    PrefixCode::new(code.level(), words)
}

fn check_sizes(code: &PrefixCode, p: &Pmf) -> Result<()> {
    if code.level() != p.level() || code.len() != p.len() {
        return Err(Error::LevelMismatch { expected: code.level(), found: p.level() });
    }
    Ok(())
}

/// Expected codeword length `L(phi, p)` in bits.
pub fn mean_length(code: &PrefixCode, p: &Pmf) -> Result<f64> {
    check_sizes(code, p)?;
    Ok(code.words().iter().zip(p.probs()).map(|(w, &q)| w.len() as f64 * q).sum())
}

/// `beta^-n L(phi, p)`: bits per level-0 symbol.
pub fn rate(code: &PrefixCode, p: &Pmf, beta: usize) -> Result<f64> {
    Ok(mean_length(code, p)? / (beta as f64).powi(code.level() as i32))
}

/// `L(phi, p) - H(p)` in bits.
pub fn redundancy(code: &PrefixCode, p: &Pmf) -> Result<f64> {
    Ok(mean_length(code, p)? - entropy(p.probs()))
}

/// The lifted code on level `n + 1`: a vertex's codeword is the
/// concatenation of the codewords of its parts, in index order.
pub fn lift(code: &PrefixCode, d: &Diagram, indexing: &Indexing) -> Result<PrefixCode> {
    let n = code.level();
    if n >= d.max_level() || code.len() != d.level_size(n) {
        return Err(Error::LevelMismatch { expected: d.max_level(), found: n });
    }
    let words = (0..d.level_size(n + 1))
        .map(|v| indexing.tuple(n + 1, v).iter().flat_map(|&u| code.word(u).iter().copied()).collect())
        .collect();
    PrefixCode::new(n + 1, words)
}

/// Applies [`lift`] `times` times.
pub fn lift_n(code: &PrefixCode, d: &Diagram, indexing: &Indexing, times: usize) -> Result<PrefixCode> {
    let mut c = code.clone();
    for _ in 0..times {
        c = lift(&c, d, indexing)?;
    }
    Ok(c)
}

/// Header width `ceil(log2 J)`.
pub fn header_width(j: usize) -> usize {
    (usize::BITS - (j - 1).leading_zeros()) as usize
}

/// Best-of-`J` code: each vertex is sent with the shortest of the `J`
/// codewords (smallest index on ties), preceded by the `ceil(log2 J)`-bit
/// big-endian value of that index minus one.
pub fn combine(codes: &[PrefixCode]) -> Result<PrefixCode> {
    if codes.len() < 2 {
        return Err(Error::InvalidArgument("combining needs at least two codes".into()));
    }
    let (level, size) = (codes[0].level(), codes[0].len());
    if let Some(c) = codes.iter().find(|c| c.level() != level || c.len() != size) {
        return Err(Error::LevelMismatch { expected: level, found: c.level() });
    }
    let width = header_width(codes.len());
    let words = (0..size)
        .map(|v| {
            let (j, best) = codes
                .iter()
                .enumerate()
                .min_by_key(|(j, c)| (c.word(v).len(), *j))
                .expect("at least two codes");
            let mut w: Bits = int_to_bits(j, width);
            w.extend_from_slice(best.word(v));
            w
        })
        .collect();
    PrefixCode::new(level, words)
}

/// Two-stage decoding of a combined codeword: read the header, then decode
/// the rest with the selected component. Returns the vertex and the
/// component index (0-based).
pub fn decode_combined(codes: &[PrefixCode], bits: &[bool]) -> Result<(usize, usize)> {
    let width = header_width(codes.len());
    if bits.len() < width {
        return Err(Error::TruncatedInput);
    }
    let j = super::bits_to_int(&bits[..width]);
    let code = codes.get(j).ok_or(Error::InvalidCodeword)?;
    let v = code.decode(&bits[width..])?;
    // The encoder would have chosen the first shortest component.
    let chosen = codes.iter().enumerate().min_by_key(|(i, c)| (c.word(v).len(), *i)).map(|(i, _)| i);
    if chosen != Some(j) {
        return Err(Error::InvalidCodeword);
    }
    Ok((v, j))
}
