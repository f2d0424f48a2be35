use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::source::{Pmf, TableSource};

/// A grid vertex of `K_n` in integer coordinates: the point is `c / beta^n`.
pub type GridPoint = Vec<u64>;

const WEIGHT_EPS: f64 = 1e-12;

/// The `(beta, k)` Kuhn grid on the unit hypercube `[0,1]^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KuhnGrid {
    beta: usize,
    k: usize,
}

/// Barycentric distribution of a point with respect to `K_n`: the vertices of
/// one simplex (in Kuhn path order from the cell corner) with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricDist {
    pub level: usize,
    pub support: Vec<(GridPoint, f64)>,
}

impl BarycentricDist {
    /// `sum_v v p(v)` in real coordinates.
    pub fn reconstruct(&self, side: u64) -> Vec<f64> {
        let k = self.support.first().map_or(0, |(v, _)| v.len());
        let mut out = vec![0.0; k];
        for (v, w) in &self.support {
            for (o, &c) in out.iter_mut().zip(v) {
                *o += w * c as f64 / side as f64;
            }
        }
        out
    }

    pub fn entropy(&self) -> f64 {
        crate::source::entropy(&self.support.iter().map(|(_, w)| *w).collect::<Vec<_>>())
    }
}

impl KuhnGrid {
    pub fn new(beta: usize, k: usize) -> Result<Self> {
        if beta < 2 || k == 0 || k > 8 {
            return Err(Error::InvalidArgument(format!("Kuhn grid needs beta >= 2 and 1 <= k <= 8, got ({beta},{k})")));
        }
        Ok(Self { beta, k })
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// `beta^n`, the number of cells per axis at level `n`.
    pub fn side(&self, n: usize) -> Result<u64> {
        (self.beta as u64)
            .checked_pow(n as u32)
            .filter(|&s| s < (1 << 52))
            .ok_or(Error::CapExceeded { what: format!("grid level {n}"), size: u128::MAX, cap: 1 << 52 })
    }

    /// `(beta^n + 1)^k`.
    pub fn level_size(&self, n: usize) -> Option<u128> {
        let s = self.side(n).ok()? as u128 + 1;
        s.checked_pow(self.k as u32)
    }

    /// Lexicographic rank of a vertex (first coordinate most significant).
    pub fn ordinal(&self, n: usize, x: &[u64]) -> u128 {
        let radix = self.side(n).expect("level fits") as u128 + 1;
        x.iter().fold(0u128, |acc, &c| acc * radix + c as u128)
    }

    pub fn vertex(&self, n: usize, mut ordinal: u128) -> GridPoint {
        let radix = self.side(n).expect("level fits") as u128 + 1;
        let mut x = vec![0; self.k];
        for slot in x.iter_mut().rev() {
            *slot = (ordinal % radix) as u64;
            ordinal /= radix;
        }
        x
    }

    fn check_point(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.k || theta.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::OutOfDomain(format!("{theta:?} is not in [0,1]^{}", self.k)));
        }
        Ok(())
    }

    fn check_vertex(&self, n: usize, x: &[u64]) -> Result<u64> {
        let side = self.side(n)?;
        if x.len() != self.k || x.iter().any(|&c| c > side) {
            return Err(Error::OutOfDomain(format!("{x:?} is not a vertex of level {n}")));
        }
        Ok(side)
    }

    /// Barycentric coordinates of `theta` in `K_n`: scale by `beta^n`, take
    /// the cell corner (clamped so the far faces belong to the last cell),
    /// sort fractional parts descending (ties by coordinate index) and walk
    /// the cell diagonal in that order.
    pub fn barycentric(&self, theta: &[f64], n: usize) -> Result<BarycentricDist> {
        self.check_point(theta)?;
        let side = self.side(n)?;
        let mut z = Vec::with_capacity(self.k);
        let mut f = Vec::with_capacity(self.k);
        for &t in theta {
            let mut u = t * side as f64;
            // Grid points like 1/3 scale to 0.999..; snap them so the
            // support does not pick up a spurious 1e-16 weight.
            if (u - u.round()).abs() < 1e-9 {
                u = u.round();
            }
            let c = (u.floor() as u64).min(side - 1);
            z.push(c);
            f.push(u - c as f64);
        }
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
        let mut support = Vec::with_capacity(self.k + 1);
        let mut v = z;
        let mut prev = 1.0;
        // Rounding noise between equal fractional parts is carried forward
        // instead of becoming a vertex of its own.
        let mut carry = 0.0;
        for &i in &order {
            let w = prev - f[i] + carry;
            if w > WEIGHT_EPS {
                support.push((v.clone(), w));
                carry = 0.0;
            } else {
                carry = w;
            }
            v[i] += 1;
            prev = f[i];
        }
        if prev + carry > WEIGHT_EPS {
            support.push((v, prev + carry));
        } else if let Some(last) = support.last_mut() {
            last.1 += prev + carry;
        }
        Ok(BarycentricDist { level: n, support })
    }

    /// The multiset `M(x)` of a level-`n` vertex (`n >= 1`) as distinct
    /// level-`(n-1)` vertices with multiplicities summing to `beta`, in Kuhn
    /// path order. Integer form of the barycentric rule.
    pub fn multiset_m(&self, x: &[u64], n: usize) -> Result<Vec<(GridPoint, usize)>> {
        if n == 0 {
            return Err(Error::InvalidArgument("level-0 vertices have no multiset".into()));
        }
        self.check_vertex(n, x)?;
        let beta = self.beta as u64;
        let below = self.side(n - 1)?;
        let mut z = Vec::with_capacity(self.k);
        let mut r = Vec::with_capacity(self.k);
        for &c in x {
            let zc = (c / beta).min(below - 1);
            z.push(zc);
            r.push(c - beta * zc);
        }
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by(|&a, &b| r[b].cmp(&r[a]));
        let mut out = Vec::with_capacity(self.k + 1);
        let mut v = z;
        let mut prev = beta;
        for &i in &order {
            let m = prev - r[i];
            if m > 0 {
                out.push((v.clone(), m as usize));
            }
            v[i] += 1;
            prev = r[i];
        }
        if prev > 0 {
            out.push((v, prev as usize));
        }
        Ok(out)
    }

    /// Checks that every level-`n` vertex has barycentric weights in
    /// `beta^-1 {0, .., beta}` with respect to `K_{n-1}`, using the
    /// floating-point barycentric routine.
    pub fn check_admissible(&self, n: usize) -> Result<()> {
        let side = self.side(n)?;
        let size = self.level_size(n).unwrap_or(u128::MAX);
        for ord in 0..size {
            let x = self.vertex(n, ord);
            let theta: Vec<f64> = x.iter().map(|&c| c as f64 / side as f64).collect();
            let dist = self.barycentric(&theta, n - 1)?;
            for (_, w) in &dist.support {
                let scaled = w * self.beta as f64;
                if (scaled - scaled.round()).abs() > 1e-9 {
                    return Err(Error::NotAdmissible(format!("vertex {x:?} of level {n} has weight {w}")));
                }
            }
        }
        Ok(())
    }

    /// The diagram induced on levels `0..=max_level`: vertices are grid
    /// vertices in lexicographic order, sources are `M(x)`.
    pub fn induced_diagram(&self, max_level: usize, cap: u128) -> Result<Diagram> {
        let mut labels = Vec::with_capacity(max_level + 1);
        let mut sources = Vec::with_capacity(max_level);
        for n in 0..=max_level {
            let size = self.level_size(n).unwrap_or(u128::MAX);
            if size > cap {
                return Err(Error::CapExceeded { what: format!("Kuhn level {n}"), size, cap });
            }
            let side = self.side(n)?;
            let mut level_labels = Vec::with_capacity(size as usize);
            let mut level_sources = Vec::with_capacity(size as usize);
            for ord in 0..size {
                let x = self.vertex(n, ord);
                level_labels.push(point_label(&x, side));
                if n > 0 {
                    let mut list = Vec::with_capacity(self.beta);
                    for (v, m) in self.multiset_m(&x, n)? {
                        let o = self.ordinal(n - 1, &v) as usize;
                        list.extend(std::iter::repeat(o).take(m));
                    }
                    level_sources.push(list);
                }
            }
            labels.push(level_labels);
            if n > 0 {
                sources.push(level_sources);
            }
        }
        Diagram::new(labels, sources)
    }

    /// `mu^theta_n` on the induced diagram's level `n`.
    pub fn mu_theta(&self, theta: &[f64], n: usize) -> Result<Pmf> {
        let size = self.level_size(n).unwrap_or(u128::MAX);
        if size > 1 << 24 {
            return Err(Error::CapExceeded { what: format!("Kuhn level {n}"), size, cap: 1 << 24 });
        }
        let mut probs = vec![0.0; size as usize];
        for (v, w) in self.barycentric(theta, n)?.support {
            probs[self.ordinal(n, &v) as usize] += w;
        }
        Pmf::new(n, probs)
    }

    /// `mu^theta` as an explicit source on the induced diagram.
    pub fn mu_theta_source(&self, theta: &[f64], max_level: usize, cap: u128) -> Result<TableSource> {
        let d = self.induced_diagram(max_level, cap)?;
        let levels = (0..=max_level).map(|n| self.mu_theta(theta, n)).collect::<Result<Vec<_>>>()?;
        TableSource::new(d, levels)
    }
}

/// `(c_1/side, ..)` with reduced fractions, e.g. `(1/2)` or `(0,2/3)`.
pub fn point_label(x: &[u64], side: u64) -> String {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let parts: Vec<String> = x
        .iter()
        .map(|&c| {
            if c == 0 || c == side {
                (c / side.max(1)).to_string()
            } else {
                let g = gcd(c, side);
                format!("{}/{}", c / g, side / g)
            }
        })
        .collect();
    format!("({})", parts.join(","))
}
