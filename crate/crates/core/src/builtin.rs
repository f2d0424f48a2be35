//! Named diagrams and sources, and the JSON source format.
//!
//! Diagram names: `ex1.1`, `ex1.2-pascal`, `canonical(ab,2)` (alphabet as
//! characters or `{a,b}`), `kuhn(3,2)`.
//!
//! Source short forms: `iid-bernoulli:0.1`, `iid:0.2/0.3/0.5`,
//! `markov:0.1/0.3` (two-state switch probabilities), `kuhn-theta:0.3`
//! (coordinates separated by `/`, optional `@beta`), `pascal-sigma`,
//! `pascal-tau`, `pascal-mixture:0.5`, `iid-mixture:0.4@0.1/0.6@0.4`
//! (weight@p pairs of Bernoulli components).

use serde_json::Value;

use crate::diagram::{json, pascal, two_point, CanonicalDiagram, Diagram};
use crate::error::{Error, Result};
use crate::grid::{tau_theta_table, KuhnGrid, TauTheta};
use crate::source::{
    mix_tables, pascal_mixture, pascal_sigma, pascal_tau, IidSource, MarkovSource, MixtureSource, Pmf, TableSource,
};

fn parse_err(what: &str, input: &str) -> Error {
    Error::Parse(format!("{what}: `{input}`"))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| parse_err("expected a number", s))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| parse_err("expected a non-negative integer", s))
}

fn call_args<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

/// A diagram by builtin name with levels `0..=levels`.
pub fn builtin_diagram(name: &str, levels: usize, cap: u128) -> Result<Diagram> {
    let name = name.trim();
    match name {
        "ex1.1" => return Ok(two_point(levels)),
        "ex1.2-pascal" => return Ok(pascal(levels)),
        _ => {}
    }
    if let Some(args) = call_args(name, "canonical") {
        let (alpha, beta) = args.rsplit_once(',').ok_or_else(|| parse_err("expected canonical(A,beta)", name))?;
        let beta = parse_usize(beta)?;
        let alpha = alpha.trim();
        let symbols: Vec<String> = match alpha.strip_prefix('{').and_then(|a| a.strip_suffix('}')) {
            Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
            None => alpha.chars().map(String::from).collect(),
        };
        return CanonicalDiagram::new(symbols, beta, levels)?.realize(levels, cap);
    }
    if let Some(args) = call_args(name, "kuhn") {
        let (beta, k) = args.split_once(',').ok_or_else(|| parse_err("expected kuhn(beta,k)", name))?;
        return KuhnGrid::new(parse_usize(beta)?, parse_usize(k)?)?.induced_diagram(levels, cap);
    }
    Err(parse_err("unknown diagram", name))
}

/// A diagram from a builtin name or JSON text.
pub fn load_diagram(text: &str, levels: usize, cap: u128) -> Result<Diagram> {
    if text.trim_start().starts_with('{') {
        json::from_json(text)
    } else {
        builtin_diagram(text, levels, cap)
    }
}

/// Any source the command line can name.
#[derive(Debug, Clone)]
pub enum AnySource {
    Table(TableSource),
    Iid(IidSource),
    Markov(MarkovSource),
    IidMixture(MixtureSource<IidSource>),
    Kuhn(TauTheta),
}

/// Runs `$body` with `$s` bound to the concrete source inside an
/// [`AnySource`].
#[macro_export]
macro_rules! with_source {
    ($src:expr, $s:ident => $body:expr) => {
        match $src {
            $crate::builtin::AnySource::Table($s) => $body,
            $crate::builtin::AnySource::Iid($s) => $body,
            $crate::builtin::AnySource::Markov($s) => $body,
            $crate::builtin::AnySource::IidMixture($s) => $body,
            $crate::builtin::AnySource::Kuhn($s) => $body,
        }
    };
}

impl AnySource {
    /// The source as an explicit table on levels `0..=levels`.
    pub fn to_table(&self, levels: usize, cap: u128) -> Result<TableSource> {
        match self {
            AnySource::Table(t) => {
                if t.top_level() < levels {
                    return Err(Error::LevelMismatch { expected: levels, found: t.top_level() });
                }
                Ok(t.clone())
            }
            AnySource::Iid(s) => s.table(levels, cap),
            AnySource::Markov(s) => s.table(levels, cap),
            AnySource::IidMixture(m) => {
                let parts = m
                    .components()
                    .iter()
                    .map(|(w, c)| Ok((*w, c.table(levels, cap)?)))
                    .collect::<Result<Vec<_>>>()?;
                mix_tables(&parts)
            }
            AnySource::Kuhn(s) => tau_theta_table(*s.table().grid(), s.theta(), levels, cap),
        }
    }

    /// Component `(weight, entropy rate)` pairs when the source is a finite
    /// mixture of sources with known rates; a single pair for an ergodic
    /// source with a known rate.
    pub fn rate_components(&self) -> Result<Vec<(f64, f64)>> {
        match self {
            AnySource::IidMixture(m) => m.component_rates(),
            other => {
                let rate = with_source!(other, s => crate::source::LevelSource::entropy_rate(s));
                rate.map(|r| vec![(1.0, r)]).ok_or(Error::UnknownRate)
            }
        }
    }
}

/// Parses a short-form source name. `levels` sizes table builtins.
pub fn builtin_source(spec: &str, levels: usize) -> Result<AnySource> {
    let spec = spec.trim();
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let need = || arg.ok_or_else(|| parse_err("missing parameter", spec));
    let list = |a: &str| a.split('/').map(parse_f64).collect::<Result<Vec<f64>>>();
    Ok(match name {
        "iid-bernoulli" => AnySource::Iid(IidSource::bernoulli(parse_f64(need()?)?, 2)?),
        "iid" => AnySource::Iid(IidSource::new(list(need()?)?, 2)?),
        "markov" => {
            let ab = list(need()?)?;
            if ab.len() != 2 {
                return Err(parse_err("expected markov:a/b", spec));
            }
            AnySource::Markov(MarkovSource::two_state(ab[0], ab[1], 2)?)
        }
        "kuhn-theta" => {
            let a = need()?;
            let (coords, beta) = match a.split_once('@') {
                Some((c, b)) => (c, parse_usize(b)?),
                None => (a, 2),
            };
            let theta = list(coords)?;
            AnySource::Kuhn(TauTheta::new(KuhnGrid::new(beta, theta.len())?, theta)?)
        }
        "pascal-sigma" => AnySource::Table(pascal_sigma(levels)),
        "pascal-tau" => AnySource::Table(pascal_tau(levels)),
        "pascal-mixture" => AnySource::Table(pascal_mixture(levels, parse_f64(need()?)?)),
        "iid-mixture" => {
            let comps = need()?
                .split('/')
                .map(|c| {
                    let (w, p) = c.split_once('@').ok_or_else(|| parse_err("expected weight@p", c))?;
                    Ok((parse_f64(w)?, IidSource::bernoulli(parse_f64(p)?, 2)?))
                })
                .collect::<Result<Vec<_>>>()?;
            AnySource::IidMixture(MixtureSource::new(comps)?)
        }
        _ => return Err(parse_err("unknown source", spec)),
    })
}

fn field_f64(v: &Value, key: &str) -> Result<f64> {
    v.get(key).and_then(Value::as_f64).ok_or_else(|| Error::Parse(format!("missing number `{key}`")))
}

fn field_usize(v: &Value, key: &str, default: usize) -> Result<usize> {
    match v.get(key) {
        None => Ok(default),
        Some(x) => x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse(format!("`{key}` must be an integer"))),
    }
}

fn f64_list(v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::Number(_) => Ok(vec![v.as_f64().expect("number")]),
        Value::Array(xs) => xs.iter().map(|x| x.as_f64().ok_or_else(|| Error::Parse("expected numbers".into()))).collect(),
        _ => Err(Error::Parse("expected a number or an array of numbers".into())),
    }
}

/// Parses the JSON source format. Table sources use their `diagram` field
/// (builtin name or inline JSON object) when present, else the `diagram`
/// argument truncated to the table's depth.
pub fn source_from_json(text: &str, diagram: Option<&Diagram>, levels: usize, cap: u128) -> Result<AnySource> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing `type`".into()))?;
    match kind {
        "table" => {
            let rows = v.get("levels").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing `levels`".into()))?;
            let top = rows.len().checked_sub(1).ok_or_else(|| Error::Parse("`levels` is empty".into()))?;
            let d = match v.get("diagram") {
                Some(Value::String(name)) => builtin_diagram(name, top, cap)?,
                Some(obj @ Value::Object(_)) => json::from_json(&obj.to_string())?,
                Some(_) => return Err(Error::Parse("`diagram` must be a name or an object".into())),
                None => {
                    let d = diagram.ok_or_else(|| Error::Parse("table source needs a diagram".into()))?;
                    if d.max_level() < top {
                        return Err(Error::LevelMismatch { expected: top, found: d.max_level() });
                    }
                    d.truncate(top)
                }
            };
            let pmfs = rows
                .iter()
                .enumerate()
                .map(|(n, row)| Pmf::new(n, f64_list(row)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(AnySource::Table(TableSource::new(d, pmfs)?))
        }
        "builtin" => {
            let name = v.get("name").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing `name`".into()))?;
            let levels = field_usize(&v, "levels", levels)?;
            let beta = field_usize(&v, "beta", 2)?;
            Ok(match name {
                "iid-bernoulli" => AnySource::Iid(IidSource::bernoulli(field_f64(&v, "p")?, beta)?),
                "iid" => AnySource::Iid(IidSource::new(f64_list(v.get("probs").unwrap_or(&Value::Null))?, beta)?),
                "markov" => AnySource::Markov(MarkovSource::two_state(field_f64(&v, "a")?, field_f64(&v, "b")?, beta)?),
                "kuhn-theta" => {
                    let theta = f64_list(v.get("theta").unwrap_or(&Value::Null))?;
                    AnySource::Kuhn(TauTheta::new(KuhnGrid::new(beta, theta.len())?, theta)?)
                }
                "pascal-sigma" => AnySource::Table(pascal_sigma(levels)),
                "pascal-tau" => AnySource::Table(pascal_tau(levels)),
                "pascal-mixture" => AnySource::Table(pascal_mixture(levels, field_f64(&v, "w")?)),
                "iid-mixture" => {
                    let comps = v
                        .get("components")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Parse("missing `components`".into()))?
                        .iter()
                        .map(|c| Ok((field_f64(c, "weight")?, IidSource::bernoulli(field_f64(c, "p")?, beta)?)))
                        .collect::<Result<Vec<_>>>()?;
                    AnySource::IidMixture(MixtureSource::new(comps)?)
                }
                other => return Err(Error::Parse(format!("unknown builtin source `{other}`"))),
            })
        }
        other => Err(Error::Parse(format!("unknown source type `{other}`"))),
    }
}

/// A source from JSON text or a short-form name.
pub fn load_source(text: &str, diagram: Option<&Diagram>, levels: usize, cap: u128) -> Result<AnySource> {
    if text.trim_start().starts_with('{') {
        source_from_json(text, diagram, levels, cap)
    } else {
        builtin_source(text, levels)
    }
}
