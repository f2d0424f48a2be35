use std::path::PathBuf;

use bratteli::builtin::AnySource;
use bratteli::diagram::{Diagram, IndexedDiagram, IndexedLevels};
use bratteli::lossy::{f_mu, lossy_rate_trace, lossy_rate_trace_types, LossyRow, StepCdf};
use bratteli::rng;
use bratteli::source::{level_entropy, level_entropy_mc, IidSource, LevelSource, TableSource};
use bratteli::vershik::{h_mu_mc, h_mu_path, smb_samples, FinitePath};
use bratteli::{with_source, Error};
use clap::Args;

use crate::output::{csv_writer, num};
use crate::{input, CliError, CliResult, Global};

/// Truncation depth for sampling the SMB integrand on unbounded sources.
const H_MU_DEPTH: usize = 60;

#[derive(Debug, Args)]
pub struct SourceArg {
    /// Source: a short form (`iid-bernoulli:0.1`, `kuhn-theta:0.3`,
    /// `pascal-mixture:0.5`, `iid-mixture:0.4@0.1/0.6@0.4`, ..) or a JSON file.
    #[arg(long)]
    pub source: String,
    /// Diagram for table sources that do not name one.
    #[arg(long, alias = "builtin")]
    pub diagram: Option<String>,
}

impl SourceArg {
    fn load(&self, g: &Global, levels: usize) -> CliResult<AnySource> {
        let d = self.diagram.as_deref().map(|s| input::diagram(s, levels, g.cap)).transpose()?;
        input::source(&self.source, d.as_ref(), levels, g.cap)
    }
}

fn beta_pow(beta: usize, n: usize) -> f64 {
    (beta as f64).powi(n as i32)
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    source: SourceArg,
    #[arg(long, default_value_t = 4)]
    up_to: usize,
    /// Draws per level when a level is too large to enumerate; 0 disables
    /// sampling.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

pub fn entropy(g: &Global, a: EntropyArgs) -> CliResult {
    let src = a.source.load(g, a.up_to)?;
    let mut r = rng::seeded(g.seed);
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record(["n", "entropy_bits", "approximant_bits_per_symbol", "std_err_bits_per_symbol", "method"])?;
    for n in 0..=a.up_to {
        let (h, se, method) = match &src {
            AnySource::Kuhn(k) => {
                let scale = beta_pow(k.beta(), n);
                let approx = k.approximant(n)?;
                (approx * scale, 0.0, "closed-form")
            }
            other => match with_source!(other, s => level_entropy(s, n, g.cap)) {
                Ok(h) => (h, 0.0, "exact"),
                Err(Error::CapExceeded { .. }) if a.samples > 0 => {
                    let e = with_source!(other, s => level_entropy_mc(s, n, a.samples, &mut r))?;
                    (e.mean, e.std_err, "monte-carlo")
                }
                Err(e) => return Err(e.into()),
            },
        };
        let scale = beta_pow(with_source!(&src, s => s.beta()), n);
        w.write_record([n.to_string(), num(h), num(h / scale), num(se / scale), method.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Source whose SMB integrand is summed along the orbit. Without it
    /// only addresses and vertex chains of `--diagram` are printed.
    #[arg(long, required_unless_present = "diagram")]
    source: Option<String>,
    /// Diagram walked when no source is given, or the diagram of a table
    /// source that does not name one.
    #[arg(long, alias = "builtin")]
    diagram: Option<String>,
    /// Level `n` of the cylinder.
    #[arg(long, default_value_t = 3)]
    level: usize,
    /// Terminal vertex: an ordinal or label on diagrams and table sources,
    /// a digit string for IID and Markov sources. Drawn from `mu_n` when
    /// omitted.
    #[arg(long)]
    vertex: Option<String>,
    /// Applications of `T`; defaults to the whole cylinder.
    #[arg(long)]
    steps: Option<u128>,
}

pub fn orbit(g: &Global, a: OrbitArgs) -> CliResult {
    if a.level == 0 {
        return Err(CliError::Input("orbits need --level of at least 1".into()));
    }
    let d = a.diagram.as_deref().map(|s| input::diagram(s, a.level, g.cap)).transpose()?;
    let Some(spec) = &a.source else {
        let d = d.expect("clap requires one");
        let v = a.vertex.as_deref().ok_or_else(|| CliError::Input("--vertex is required without --source".into()))?;
        let x = diagram_vertex(&d, a.level, v)?;
        let labels = d.clone();
        let walker = IndexedDiagram::lex(d)?;
        return walk_orbit(g, &walker, None::<&TableSource>, a.level, x, a.steps, |n, k| labels.label(n, *k).to_string());
    };
    let src = input::source(spec, d.as_ref(), a.level, g.cap)?;
    let mut r = rng::seeded(g.seed);
    let v = a.vertex.as_deref();
    match &src {
        AnySource::Table(t) => {
            if t.indexing().is_none() {
                return Err(Error::NotRegular("source diagram has no indexing".into()).into());
            }
            let x = match v {
                None => t.sample(a.level, &mut r)?,
                Some(s) => diagram_vertex(t.diagram(), a.level, s)?,
            };
            walk_orbit(g, t, Some(t), a.level, x, a.steps, |n, k| t.diagram().label(n, *k).to_string())
        }
        AnySource::Iid(s) => {
            let x = word_vertex(s, a.level, v, &mut r)?;
            walk_orbit(g, s, Some(s), a.level, x, a.steps, |n, w| render_word(n, w))
        }
        AnySource::Markov(s) => {
            let x = word_vertex(s, a.level, v, &mut r)?;
            walk_orbit(g, s, Some(s), a.level, x, a.steps, |n, w| render_word(n, w))
        }
        AnySource::IidMixture(s) => {
            let x = word_vertex(s, a.level, v, &mut r)?;
            walk_orbit(g, s, Some(s), a.level, x, a.steps, |n, w| render_word(n, w))
        }
        AnySource::Kuhn(s) => {
            if v.is_some() {
                return Err(CliError::Input("Kuhn sources take no --vertex; the vertex is drawn".into()));
            }
            let x = s.sample(a.level, &mut r)?;
            walk_orbit(g, s, Some(s), a.level, x, a.steps, |_, t| t.render())
        }
    }
}

fn diagram_vertex(d: &Diagram, n: usize, item: &str) -> CliResult<usize> {
    if n > d.max_level() {
        return Err(Error::LevelMismatch { expected: d.max_level(), found: n }.into());
    }
    if let Some(k) = d.ordinal_of(n, item) {
        return Ok(k);
    }
    item.parse::<usize>()
        .ok()
        .filter(|&k| k < d.level_size(n))
        .ok_or_else(|| CliError::Input(format!("no vertex `{item}` at level {n}")))
}

fn render_word(_: usize, w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

fn word_vertex<S>(s: &S, n: usize, given: Option<&str>, rng: &mut rng::SimRng) -> CliResult<Vec<u8>>
where
    S: LevelSource<Vertex = Vec<u8>>,
{
    let Some(text) = given else { return Ok(s.sample(n, rng)?) };
    let want = s.beta().pow(n as u32);
    let word: Option<Vec<u8>> = text.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
    match word {
        Some(w) if w.len() == want && s.log2_prob(n, &w).is_finite() => Ok(w),
        Some(w) if w.len() == want => Err(Error::ZeroProbabilityVertex(n).into()),
        _ => Err(CliError::Input(format!("--vertex must be {want} digits"))),
    }
}

/// Walks `T` through the cylinder of `x`. With a source, also prints the
/// SMB integrand at every non-final path; over the whole cylinder its sum
/// equals `-log2 mu_n(x)`.
fn walk_orbit<W, S>(
    g: &Global,
    walker: &W,
    source: Option<&S>,
    n: usize,
    x: W::Vertex,
    steps: Option<u128>,
    render: impl Fn(usize, &W::Vertex) -> String,
) -> CliResult
where
    W: IndexedLevels,
    S: LevelSource<Vertex = W::Vertex>,
{
    let paths = (walker.beta() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let full = paths - 1;
    let steps = steps.unwrap_or(full);
    if steps > full {
        return Err(CliError::Input(format!("a level-{n} cylinder allows at most {full} steps")));
    }
    if steps > g.cap {
        return Err(Error::CapExceeded { what: format!("orbit of a level-{n} cylinder"), size: steps, cap: g.cap }.into());
    }
    let target = match source {
        Some(s) => {
            let t = -s.log2_prob(n, &x);
            if !t.is_finite() {
                return Err(Error::ZeroProbabilityVertex(n).into());
            }
            Some(t)
        }
        None => None,
    };
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record(["step", "index", "address", "n_omega", "vertex_chain", "h_mu_bits", "cumulative_bits"])?;
    let mut y = FinitePath::initial(walker, n, x.clone())?;
    let mut total = 0.0;
    for step in 0..=steps {
        let n_omega = y.n_omega().map_or(String::new(), |k| k.to_string());
        let chain: Vec<String> = y.chain(walker).iter().enumerate().map(|(j, v)| render(j, v)).collect();
        let (h, cum) = match source {
            Some(s) if !y.is_final() => {
                let h = h_mu_path(s, &y)?;
                total += h;
                (num(h), num(total))
            }
            Some(_) => (String::new(), num(total)),
            None => (String::new(), String::new()),
        };
        w.write_record([step.to_string(), y.index().to_string(), y.address().to_string(), n_omega, chain.join(" "), h, cum])?;
        if step < steps {
            y = y.vershik_apply()?;
        }
    }
    w.flush()?;
    if let Some(target) = target {
        if steps == full {
            eprintln!(
                "vertex {}: -log2 mu_{n}(x) = {}, orbit sum = {}, residual = {:e}",
                render(n, &x),
                num(target),
                num(total),
                (total - target).abs()
            );
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SmbArgs {
    #[command(flatten)]
    source: SourceArg,
    /// Level `n` of the statistic `-beta^-n log2 mu_n(X_n)`.
    #[arg(long, default_value_t = 12)]
    level: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Also write every sampled statistic to this CSV file.
    #[arg(long)]
    samples_out: Option<PathBuf>,
}

pub fn smb(g: &Global, a: SmbArgs) -> CliResult {
    if a.samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let src = a.source.load(g, a.level)?;
    let xs = with_source!(&src, s => smb_samples(s, a.level, a.samples, g.seed))?;
    let depth = with_source!(&src, s => s.max_level()).unwrap_or(H_MU_DEPTH).min(H_MU_DEPTH);
    let h = match with_source!(&src, s => h_mu_mc(s, a.samples, depth, g.seed ^ 0x9e37_79b9)) {
        Ok(e) => Some(e),
        Err(Error::TruncationTooShallow) => None,
        Err(e) => return Err(e.into()),
    };
    let rate = with_source!(&src, s => s.entropy_rate());
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    let quantile = |q: f64| sorted[((q * (sorted.len() - 1) as f64).round() as usize).min(sorted.len() - 1)];
    let opt = |x: Option<f64>| x.map_or(String::new(), num);
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record([
        "level",
        "samples",
        "mean_bits_per_symbol",
        "sd_bits_per_symbol",
        "std_err_bits_per_symbol",
        "q05_bits_per_symbol",
        "q25_bits_per_symbol",
        "median_bits_per_symbol",
        "q75_bits_per_symbol",
        "q95_bits_per_symbol",
        "h_mu_mean_bits_per_symbol",
        "h_mu_std_err_bits_per_symbol",
        "entropy_rate_bits_per_symbol",
    ])?;
    w.write_record([
        a.level.to_string(),
        xs.len().to_string(),
        num(mean),
        num(sd),
        num(sd / n.sqrt()),
        num(quantile(0.05)),
        num(quantile(0.25)),
        num(quantile(0.5)),
        num(quantile(0.75)),
        num(quantile(0.95)),
        opt(h.map(|e| e.mean)),
        opt(h.map(|e| e.std_err)),
        opt(rate),
    ])?;
    w.flush()?;
    if let Some(path) = &a.samples_out {
        let mut s = csv::Writer::from_path(path)?;
        s.write_record(["statistic_bits_per_symbol"])?;
        for x in &xs {
            s.write_record([num(*x)])?;
        }
        s.flush()?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct LossyArgs {
    #[command(flatten)]
    source: SourceArg,
    /// Allowed error probability, in `[0, 1)`.
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 4)]
    up_to: usize,
    /// SMB draws for empirical bounds when the limit law is unknown.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

fn binary_iid(s: &IidSource) -> bool {
    s.beta() == 2 && s.symbol_probs().len() == 2
}

pub fn lossy(g: &Global, a: LossyArgs) -> CliResult {
    let src = a.source.load(g, a.up_to)?;
    let levels: Vec<usize> = (0..=a.up_to).collect();
    let rows: Vec<LossyRow> = match &src {
        AnySource::Iid(s) if binary_iid(s) => lossy_rate_trace_types(s, a.delta, &levels)?,
        AnySource::IidMixture(m) if m.components().iter().all(|(_, c)| binary_iid(c)) => {
            lossy_rate_trace_types(m, a.delta, &levels)?
        }
        other => with_source!(other, s => lossy_rate_trace(s, a.delta, a.up_to, g.cap))?,
    };
    let (cdf, kind): (Option<StepCdf>, &str) = match src.rate_components() {
        Ok(parts) => (Some(f_mu(&parts)?), "limit"),
        Err(Error::UnknownRate) if a.samples > 0 => {
            let xs = with_source!(&src, s => smb_samples(s, a.up_to.max(1), a.samples, g.seed))?;
            (Some(StepCdf::empirical(&xs)?), "empirical")
        }
        Err(Error::UnknownRate) => (None, ""),
        Err(e) => return Err(e.into()),
    };
    let (lo, hi) = match &cdf {
        Some(c) => (num(c.r_minus(a.delta)?), num(c.r_plus(a.delta)?)),
        None => (String::new(), String::new()),
    };
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record([
        "n",
        "covering_size",
        "log2_covering_bits",
        "rate_bits_per_symbol",
        "r_minus_bits_per_symbol",
        "r_plus_bits_per_symbol",
        "bounds",
    ])?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.covering.map_or(String::new(), |m| m.to_string()),
            num(r.log2_covering),
            num(r.rate),
            lo.clone(),
            hi.clone(),
            kind.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
