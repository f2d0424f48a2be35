use rand::Rng;

use super::adic::AdicAddress;
use super::path::{sample_path, FinitePath, PathSample};
use crate::error::{Error, Result};
use crate::rng::{stream, SimRng};
use crate::source::{Estimate, LevelSource};

/// Monte Carlo work is split into this many fixed streams so results do not
/// depend on the machine's thread count.
pub const MC_CHUNKS: usize = 8;

/// `-beta^-n log2 mu_n(X_n)`.
pub fn smb_statistic<S: LevelSource>(s: &S, sample: &PathSample<S::Vertex>) -> Result<f64> {
    let n = sample.level();
    let lp = s.log2_prob(n, &sample.chain[n]);
    if !lp.is_finite() {
        return Err(Error::ZeroProbabilityVertex(n));
    }
    Ok(-lp / (s.beta() as f64).powi(n as i32))
}

/// `h_mu` given the vertex `X_N` at level `N = N(omega)`.
fn h_mu_at<S: LevelSource>(s: &S, n_omega: usize, x: &S::Vertex) -> Result<f64> {
    let beta = s.beta();
    let mut lp = s.log2_prob(n_omega, x);
    if !lp.is_finite() {
        return Err(Error::ZeroProbabilityVertex(n_omega));
    }
    if n_omega > 1 {
        for i in 0..beta {
            let child = s.log2_prob(n_omega - 1, &s.part(n_omega, x, i));
            if !child.is_finite() {
                return Err(Error::ZeroProbabilityVertex(n_omega - 1));
            }
            lp -= child;
        }
    }
    Ok(-lp / (beta - 1) as f64)
}

/// The SMB integrand: `-log2 mu(X_1) / (beta - 1)` when `N = 1`, otherwise
/// `-log2 [mu(X_N) / prod_i mu(X_N[i])] / (beta - 1)`.
pub fn h_mu<S: LevelSource>(s: &S, sample: &PathSample<S::Vertex>) -> Result<f64> {
    let n = sample.path.n_omega().ok_or(Error::TruncationTooShallow)?;
    h_mu_at(s, n, &sample.chain[n])
}

/// `h_mu` on a truncated path without a cached chain.
pub fn h_mu_path<S: LevelSource>(s: &S, path: &FinitePath<S::Vertex>) -> Result<f64> {
    let n = path.n_omega().ok_or(Error::TruncationTooShallow)?;
    h_mu_at(s, n, &path.vertex_at(s, n))
}

/// `P{N = n} = beta^-(n-1) (1 - 1/beta)`.
pub fn n_law(beta: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let b = beta as f64;
    b.powi(-(n as i32 - 1)) * (1.0 - 1.0 / b)
}

/// Draws `N` from its law: the position of the first address digit below
/// `beta - 1`.
pub fn sample_n<R: Rng + ?Sized>(beta: usize, rng: &mut R) -> usize {
    let mut n = 1;
    while rng.random_range(0..beta) == beta - 1 {
        n += 1;
    }
    n
}

/// One draw of `h_mu` under `P_mu`. Given `N`, the path is only needed up to
/// level `N`, and `X_N ~ mu_N` there. Fails with `TruncationTooShallow` when
/// `N` exceeds `max_level` (probability `beta^-max_level`).
pub fn sample_h_mu<S: LevelSource, R: Rng + ?Sized>(s: &S, max_level: usize, rng: &mut R) -> Result<f64> {
    let n = sample_n(s.beta(), rng);
    if n > max_level || s.max_level().is_some_and(|m| m < n) {
        return Err(Error::TruncationTooShallow);
    }
    let x = s.sample(n, rng)?;
    h_mu_at(s, n, &x)
}

/// Runs `samples` draws of `f` on [`MC_CHUNKS`] independent streams of
/// `seed`, in parallel, concatenated in stream order.
pub fn mc_parallel<F>(samples: usize, seed: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut SimRng) -> Result<f64> + Sync,
{
    let per = samples.div_ceil(MC_CHUNKS);
    let chunks: Vec<Result<Vec<f64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..MC_CHUNKS)
            .map(|c| {
                let f = &f;
                let count = per.min(samples.saturating_sub(c * per));
                scope.spawn(move || {
                    let mut rng = stream(seed, c as u64);
                    (0..count).map(|_| f(&mut rng)).collect::<Result<Vec<f64>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(samples);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// `samples` values of the SMB statistic at level `n`.
pub fn smb_samples<S>(s: &S, n: usize, samples: usize, seed: u64) -> Result<Vec<f64>>
where
    S: LevelSource + Sync,
{
    mc_parallel(samples, seed, |rng| smb_statistic(s, &sample_path(s, n, rng)?))
}

/// Monte Carlo estimate of `E[h_mu]`, which equals the entropy rate.
pub fn h_mu_mc<S>(s: &S, samples: usize, max_level: usize, seed: u64) -> Result<Estimate>
where
    S: LevelSource + Sync,
{
    Ok(Estimate::from_samples(&mc_parallel(samples, seed, |rng| sample_h_mu(s, max_level, rng))?))
}

/// Checks `-log2 mu_n(x) = sum_j h_mu(T^j omega)` over the window
/// `j = -i ..= -i + beta^n - 2` for every starting index `i` in the cylinder
/// `{X_n = x}`, walking the orbit with the Vershik map and its inverse.
/// Returns the largest absolute residual.
pub fn verify_telescoping<S: LevelSource>(s: &S, n: usize, x: &S::Vertex, budget: u128) -> Result<f64> {
    let beta = s.beta();
    let paths = (beta as u128).checked_pow(n as u32).ok_or(Error::Budget { needed: u128::MAX, budget })?;
    let needed = paths.saturating_mul(paths);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let target = -s.log2_prob(n, x);
    if !target.is_finite() {
        return Err(Error::ZeroProbabilityVertex(n));
    }
    let mut worst: f64 = 0.0;
    for i in 0..paths {
        let mut omega = FinitePath::from_index(s, n, x.clone(), i)?;
        for _ in 0..i {
            omega = omega.vershik_inverse()?;
        }
        let mut sum = 0.0;
        for j in 0..paths - 1 {
            sum += h_mu_path(s, &omega)?;
            if j + 2 < paths {
                omega = omega.vershik_apply()?;
            }
        }
        worst = worst.max((sum - target).abs());
    }
    Ok(worst)
}

/// The cylinder `C_n[alpha, x]` holding a sample, as (address, vertex).
pub fn cylinder<V: Clone>(sample: &PathSample<V>) -> (AdicAddress, V) {
    (sample.path.address().clone(), sample.path.top().clone())
}
