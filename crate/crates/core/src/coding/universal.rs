use std::sync::Arc;

use super::{canonical_code, combine, header_width, lift, lift_n, rate, root_complement, PrefixCode};
use crate::diagram::{Diagram, Indexing};
use crate::error::{Error, Result};
use crate::source::TableSource;

/// Default bound on level size for exhaustive encoder enumeration.
pub const DEFAULT_LEVEL_CAP: usize = 8;

/// Every complete length vector `(l_0, .., l_{m-1})` with entries in
/// `1..=cap` and `sum 2^-l = 1`, in lexicographic order.
pub fn complete_length_vectors(m: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, cap: usize, prefix: &mut Vec<usize>, used: u128, out: &mut Vec<Vec<usize>>) {
        let full: u128 = 1 << cap;
        let left = m - prefix.len();
        if left == 0 {
            if used == full {
                out.push(prefix.clone());
            }
            return;
        }
        for l in 1..=cap {
            let w = 1u128 << (cap - l);
            let after = used + w;
            // Remaining slots contribute between (left-1)*2^0 and (left-1)*2^(cap-1) units.
            let rest = (left - 1) as u128;
            if after + rest > full || after + rest * (full >> 1) < full {
                continue;
            }
            prefix.push(l);
            rec(m, cap, prefix, after, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 1 {
        out.push(vec![0]);
        return out;
    }
    if cap == 0 || cap > 120 {
        return out;
    }
    rec(m, cap, &mut Vec::with_capacity(m), 0, &mut out);
    out
}

/// All proper encoders on the levels whose size is at most `level_cap`,
/// ordered by level, then length vector, and within a length vector the
/// canonical code before its root-complemented twin. Codeword lengths are at
/// most `length_cap` (default: the level size).
///
/// Fails with `CapExceeded` when level 0 itself is too large.
pub fn encoder_enumeration(d: &Diagram, level_cap: usize, length_cap: Option<usize>) -> Result<Vec<PrefixCode>> {
    if d.level_size(0) > level_cap {
        return Err(Error::CapExceeded {
            what: "level 0 for encoder enumeration".into(),
            size: d.level_size(0) as u128,
            cap: level_cap as u128,
        });
    }
    let mut out = Vec::new();
    for n in 0..=d.max_level() {
        let m = d.level_size(n);
        if m > level_cap {
            continue;
        }
        let cap = length_cap.unwrap_or(m);
        for lengths in complete_length_vectors(m, cap) {
            let code = canonical_code(n, &lengths)?;
            if m > 1 {
                let twin = root_complement(&code)?;
                out.push(code);
                out.push(twin);
            } else {
                out.push(code);
            }
        }
    }
    Ok(out)
}

/// The triangular array built from an enumeration of proper encoders:
/// seed `i` (1-based) sits on the diagonal at order `i - 1`, lifted from its
/// own order, and column `j` holds codes of order `j - 1`.
#[derive(Debug, Clone)]
pub struct EncoderArray {
    diagram: Arc<Diagram>,
    indexing: Indexing,
    seeds: Vec<PrefixCode>,
}

impl EncoderArray {
    /// Fails if some seed's order exceeds its 0-based position.
    pub fn new(diagram: Arc<Diagram>, indexing: Indexing, seeds: Vec<PrefixCode>) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::InvalidArgument("the array needs at least one seed".into()));
        }
        if let Some((i, s)) = seeds.iter().enumerate().find(|(i, s)| s.level() > *i) {
            return Err(Error::InvalidArgument(format!("seed {i} has order {} beyond its position", s.level())));
        }
        Ok(Self { diagram, indexing, seeds })
    }

    /// Enumerates seeds with [`encoder_enumeration`].
    pub fn build(diagram: Arc<Diagram>, level_cap: usize, length_cap: Option<usize>) -> Result<Self> {
        let indexing = Indexing::lex(&diagram)?;
        let seeds = encoder_enumeration(&diagram, level_cap, length_cap)?;
        Self::new(diagram, indexing, seeds)
    }

    /// Array over a table source's diagram and indexing.
    pub fn for_source(source: &TableSource, level_cap: usize) -> Result<Self> {
        let indexing = source
            .indexing()
            .cloned()
            .ok_or_else(|| Error::NotRegular("source diagram has no indexing".into()))?;
        let seeds = encoder_enumeration(source.diagram(), level_cap, None)?;
        Self::new(source.diagram_arc(), indexing, seeds)
    }

    pub fn seeds(&self) -> &[PrefixCode] {
        &self.seeds
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    /// `phi_{i,j}` for `1 <= i <= j`: seed `i` lifted to order `j - 1`.
    pub fn entry(&self, i: usize, j: usize) -> Result<PrefixCode> {
        if i == 0 || i > j {
            return Err(Error::InvalidArgument(format!("array entry ({i},{j}) is outside the triangle")));
        }
        let seed = self.seeds.get(i - 1).ok_or(Error::CapExceeded {
            what: "enumerated seeds".into(),
            size: i as u128,
            cap: self.seeds.len() as u128,
        })?;
        if j - 1 > self.diagram.max_level() {
            return Err(Error::LevelMismatch { expected: self.diagram.max_level(), found: j - 1 });
        }
        lift_n(seed, &self.diagram, &self.indexing, j - 1 - seed.level())
    }

    /// Number of array rows combined by `tau_n`: `n + 1`, capped by the
    /// number of enumerated seeds.
    pub fn tau_width(&self, n: usize) -> usize {
        (n + 1).min(self.seeds.len())
    }

    /// The order-`n` code of the scheme: the best-of combination of column
    /// `n + 1`. A single row is returned without a header.
    pub fn tau(&self, n: usize) -> Result<PrefixCode> {
        if n > self.diagram.max_level() {
            return Err(Error::LevelMismatch { expected: self.diagram.max_level(), found: n });
        }
        let column = self.column(n)?;
        if column.len() == 1 {
            return Ok(column.into_iter().next().expect("one code"));
        }
        combine(&column)
    }

    /// `phi_{1,n+1}, .., phi_{J,n+1}` with `J = tau_width(n)`, lifting each
    /// seed incrementally.
    pub fn column(&self, n: usize) -> Result<Vec<PrefixCode>> {
        (1..=self.tau_width(n)).map(|i| self.entry(i, n + 1)).collect()
    }
}

/// One row of a rate trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub level: usize,
    /// `R(tau_n, mu_n)`, bits per level-0 symbol.
    pub rate: f64,
    /// `beta^-n H(mu_n)`.
    pub approximant: f64,
    /// `L(tau_n, mu_n) - H(mu_n)`, bits.
    pub redundancy: f64,
    /// `beta^-n ceil(log2 J)`.
    pub header: f64,
    /// `min_i R(phi_{i,n+1}, mu_n)`.
    pub best_row_rate: f64,
}

/// Rates of `tau_0, .., tau_up_to` against an explicit source.
pub fn rate_trace(array: &EncoderArray, source: &TableSource, up_to: usize) -> Result<Vec<RateRow>> {
    let beta = array.diagram.beta().ok_or_else(|| Error::NotRegular("no common arity".into()))?;
    let scale = |n: usize| (beta as f64).powi(-(n as i32));
    let mut rows = Vec::with_capacity(up_to + 1);
    for n in 0..=up_to {
        let mu = source.pmf(n);
        let column = array.column(n)?;
        let tau = if column.len() == 1 { column[0].clone() } else { combine(&column)? };
        let best_row_rate = column.iter().map(|c| rate(c, mu, beta)).collect::<Result<Vec<_>>>()?.into_iter().fold(f64::INFINITY, f64::min);
        let r = rate(&tau, mu, beta)?;
        let h = mu.entropy();
        let width = if column.len() == 1 { 0 } else { header_width(column.len()) };
        rows.push(RateRow {
            level: n,
            rate: r,
            approximant: h * scale(n),
            redundancy: r / scale(n) - h,
            header: width as f64 * scale(n),
            best_row_rate,
        });
    }
    Ok(rows)
}

/// Lifts `code` up to order `level` on the array's diagram.
pub fn lift_to(array: &EncoderArray, code: &PrefixCode, level: usize) -> Result<PrefixCode> {
    let mut c = code.clone();
    while c.level() < level {
        c = lift(&c, &array.diagram, &array.indexing)?;
    }
    Ok(c)
}
