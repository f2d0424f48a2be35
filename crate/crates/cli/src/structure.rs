use std::io::Write;

use bratteli::builtin::AnySource;
use bratteli::diagram::{self, Diagram, Indexing};
use bratteli::rng;
use bratteli::source::{validate_oracle, Pmf};
use bratteli::with_source;
use clap::Args;

use crate::output::{csv_writer, num, sink};
use crate::{input, CliError, CliResult, Global};

/// Two-sided normal bound used when sampling oracle levels.
const ORACLE_Z: f64 = 4.5;

#[derive(Debug, Args)]
pub struct DiagramArg {
    /// Builtin name (`ex1.1`, `ex1.2-pascal`, `canonical(ab,2)`, `kuhn(3,2)`)
    /// or a JSON diagram file.
    #[arg(long, alias = "builtin")]
    pub diagram: String,
    /// Deepest level built for named diagrams.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
}

impl DiagramArg {
    pub fn load(&self, g: &Global) -> CliResult<Diagram> {
        input::diagram(&self.diagram, self.levels, g.cap)
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Diagram to check for regularity.
    #[arg(long, alias = "builtin", conflicts_with = "source", required_unless_present = "source")]
    diagram: Option<String>,
    /// Source to check for consistency (short form or JSON file).
    #[arg(long)]
    source: Option<String>,
    /// Arity to check against; defaults to the diagram's own in-degree.
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Tolerance for table consistency.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Draws per level when checking a sampled source.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
}

pub fn check(g: &Global, a: CheckArgs) -> CliResult {
    let mut out = sink(g.out.as_deref())?;
    if let Some(spec) = &a.source {
        let src = input::source(spec, None, a.levels, g.cap)?;
        return check_source(g, &a, &src, &mut out);
    }
    let d = input::diagram(a.diagram.as_deref().expect("clap requires one"), a.levels, g.cap)?;
    let report = match a.beta {
        Some(b) => d.check_regular(b),
        None => d.check_regular_self(),
    };
    writeln!(out, "regular: {}", report.regular)?;
    if let Some(b) = a.beta.or(d.beta()) {
        writeln!(out, "beta: {b}")?;
    }
    let sizes: Vec<String> = (0..=d.max_level()).map(|n| d.level_size(n).to_string()).collect();
    writeln!(out, "level sizes: {}", sizes.join(" "))?;
    out.flush()?;
    match report.violation {
        Some(v) => Err(CliError::Validation(v.to_string())),
        None => Ok(()),
    }
}

fn check_source(g: &Global, a: &CheckArgs, src: &AnySource, out: &mut dyn Write) -> CliResult {
    if let AnySource::Table(t) = src {
        let r = t.validate(a.tol);
        writeln!(out, "consistent: {}", r.consistent)?;
        writeln!(out, "max deviation: {:e}", r.max_deviation)?;
        out.flush()?;
        return if r.consistent {
            Ok(())
        } else {
            Err(CliError::Validation(format!("levels disagree with transport by {:e}", r.max_deviation)))
        };
    }
    let mut r = rng::seeded(g.seed);
    let mut ok = true;
    for n in 0..=a.levels {
        let report = with_source!(src, s => validate_oracle(s, n, a.samples, g.cap, ORACLE_Z, &mut r))?;
        writeln!(out, "level {n}: consistent {} (max deviation {:e})", report.consistent, report.max_deviation)?;
        ok &= report.consistent;
    }
    writeln!(out, "consistent: {ok}")?;
    out.flush()?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Validation("sampled frequencies disagree with the pointwise law".into()))
    }
}

#[derive(Debug, Args)]
pub struct CanonicalizeArgs {
    #[command(flatten)]
    diagram: DiagramArg,
    /// Deepest level to canonicalize; defaults to the whole diagram.
    #[arg(long)]
    up_to: Option<usize>,
    /// Print the canonical diagram as JSON instead of the string table.
    #[arg(long)]
    json: bool,
}

pub fn canonicalize(g: &Global, a: CanonicalizeArgs) -> CliResult {
    let d = a.diagram.load(g)?;
    let idx = Indexing::lex(&d)?;
    let up_to = a.up_to.unwrap_or(d.max_level());
    let (image, canon) = diagram::canonicalize(&d, &idx, up_to, g.cap)?;
    if a.json {
        let mut out = sink(g.out.as_deref())?;
        writeln!(out, "{}", diagram::json::to_json(&canon))?;
        out.flush()?;
        return Ok(());
    }
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record(["level", "ordinal", "label", "canonical_string"])?;
    for n in 0..=up_to {
        for k in 0..d.level_size(n) {
            w.write_record([n.to_string(), k.to_string(), d.label(n, k).to_string(), image.render(n, k)])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    #[command(flatten)]
    diagram: DiagramArg,
    /// Probabilities on the starting level, in ordinal order.
    #[arg(long)]
    pmf: String,
    /// Level the PMF lives on; defaults to the top level.
    #[arg(long)]
    from: Option<usize>,
}

pub fn transport(g: &Global, a: TransportArgs) -> CliResult {
    let d = a.diagram.load(g)?;
    let from = a.from.unwrap_or(d.max_level());
    if from > d.max_level() {
        return Err(CliError::Core(bratteli::Error::LevelMismatch { expected: d.max_level(), found: from }));
    }
    let mut pmf = Pmf::new(from, input::numbers(&a.pmf, "--pmf")?)?;
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record(["level", "ordinal", "label", "probability"])?;
    loop {
        let n = pmf.level();
        for (k, p) in pmf.probs().iter().enumerate() {
            w.write_record([n.to_string(), k.to_string(), d.label(n, k).to_string(), num(*p)])?;
        }
        if n == 0 {
            break;
        }
        pmf = bratteli::source::transport(&d, &pmf)?;
    }
    w.flush()?;
    Ok(())
}
