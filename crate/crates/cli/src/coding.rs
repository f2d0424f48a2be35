use std::io::{Read, Write};
use std::sync::Arc;

use bratteli::coding::{rate_trace, Bits, EncoderArray, PrefixCode, SequentialScheme, DEFAULT_LEVEL_CAP};
use bratteli::diagram::{CanonicalDiagram, Diagram, Indexing};
use clap::Args;

use crate::output::{bits_to_hex, csv_writer, hex_to_bits, num, sink};
use crate::{input, CliError, CliResult, Global};

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Diagram whose vertices are encoded (vertex mode).
    #[arg(long, alias = "builtin", conflicts_with = "alphabet", required_unless_present = "alphabet")]
    diagram: Option<String>,
    /// Deepest level built for named diagrams.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Order of the code in vertex mode.
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Symbols of the text alphabet, one character each (text mode).
    #[arg(long)]
    alphabet: Option<String>,
    /// Text mode: frames hold `2^max-order` symbols.
    #[arg(long, default_value_t = 2)]
    max_order: usize,
    /// Levels larger than this get no enumerated seed encoders.
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
    level_cap: usize,
}

enum Scheme {
    Vertices { diagram: Diagram, code: PrefixCode },
    Text { symbols: Vec<char>, frame: usize, scheme: SequentialScheme },
}

impl SchemeArgs {
    fn build(&self, g: &Global) -> CliResult<Scheme> {
        if let Some(alpha) = &self.alphabet {
            let mut symbols: Vec<char> = alpha.chars().collect();
            symbols.sort_unstable();
            symbols.dedup();
            if symbols.len() < 2 || symbols.len() != alpha.chars().count() {
                return Err(CliError::Input("--alphabet needs at least two distinct characters".into()));
            }
            let labels = symbols.iter().map(|c| c.to_string()).collect();
            let d = CanonicalDiagram::new(labels, 2, self.max_order)?.realize(self.max_order, g.cap)?;
            let array = EncoderArray::build(Arc::new(d), self.level_cap, None)?;
            let scheme = SequentialScheme::from_array(&array, symbols.len(), self.max_order)?;
            return Ok(Scheme::Text { symbols, frame: 1 << self.max_order, scheme });
        }
        let d = input::diagram(self.diagram.as_deref().expect("clap requires one"), self.levels, g.cap)?;
        let array = EncoderArray::build(Arc::new(d.clone()), self.level_cap, None)?;
        let code = array.tau(self.level)?;
        Ok(Scheme::Vertices { diagram: d, code })
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Vertex ordinals or labels to encode, comma separated (vertex mode).
    #[arg(long, conflicts_with = "text")]
    vertices: Option<String>,
    /// Text to encode (text mode).
    #[arg(long)]
    text: Option<String>,
}

pub fn encode(g: &Global, a: EncodeArgs) -> CliResult {
    let mut bits: Bits = Vec::new();
    match a.scheme.build(g)? {
        Scheme::Vertices { diagram, code } => {
            let list = a.vertices.ok_or_else(|| CliError::Input("vertex mode needs --vertices".into()))?;
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v = vertex_ordinal(&diagram, a.scheme.level, item)?;
                bits.extend_from_slice(code.encode(v)?);
            }
        }
        Scheme::Text { symbols, frame, scheme } => {
            let text = a.text.ok_or_else(|| CliError::Input("text mode needs --text".into()))?;
            let ranks = text
                .chars()
                .map(|c| symbols.binary_search(&c).map_err(|_| CliError::Input(format!("`{c}` is not in the alphabet"))))
                .collect::<CliResult<Vec<usize>>>()?;
            for chunk in ranks.chunks(frame) {
                bits.extend(scheme.encode(chunk)?);
            }
        }
    }
    let mut out = sink(g.out.as_deref())?;
    writeln!(out, "{}", bits_to_hex(&bits))?;
    out.flush()?;
    Ok(())
}

fn vertex_ordinal(d: &Diagram, level: usize, item: &str) -> CliResult<usize> {
    if level > d.max_level() {
        return Err(CliError::Core(bratteli::Error::LevelMismatch { expected: d.max_level(), found: level }));
    }
    if let Some(k) = d.ordinal_of(level, item) {
        return Ok(k);
    }
    match item.parse::<usize>() {
        Ok(k) if k < d.level_size(level) => Ok(k),
        _ => Err(CliError::Input(format!("no vertex `{item}` at level {level}"))),
    }
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Bitstream as printed by `encode`; read from stdin when omitted.
    #[arg(long)]
    bits: Option<String>,
    /// Number of symbols in text mode.
    #[arg(long)]
    length: Option<usize>,
}

pub fn decode(g: &Global, a: DecodeArgs) -> CliResult {
    let raw = match a.bits {
        Some(b) => input::text_or_file(&b)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let bits = hex_to_bits(&raw).ok_or_else(|| CliError::Input("expected `<bit count>:<hex>`".into()))?;
    match a.scheme.build(g)? {
        Scheme::Vertices { diagram, code } => {
            let vs = code.decode_all(&bits)?;
            let mut w = csv_writer(g.out.as_deref())?;
            w.write_record(["ordinal", "label"])?;
            for v in vs {
                w.write_record([v.to_string(), diagram.label(a.scheme.level, v).to_string()])?;
            }
            w.flush()?;
        }
        Scheme::Text { symbols, frame, scheme } => {
            let k = a.length.ok_or_else(|| CliError::Input("text mode needs --length".into()))?;
            let mut text = String::with_capacity(k);
            let mut pos = 0;
            let mut left = k;
            while left > 0 {
                let len = left.min(frame);
                let (chunk, next) = scheme.decode_prefix(len, &bits, pos)?;
                text.extend(chunk.into_iter().map(|r| symbols[r]));
                pos = next;
                left -= len;
            }
            if pos != bits.len() {
                return Err(CliError::Core(bratteli::Error::InvalidCodeword));
            }
            let mut out = sink(g.out.as_deref())?;
            writeln!(out, "{text}")?;
            out.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    /// Source (short form or JSON file).
    #[arg(long)]
    source: String,
    /// Diagram for table sources that do not name one.
    #[arg(long, alias = "builtin")]
    diagram: Option<String>,
    /// Deepest order in the trace.
    #[arg(long, default_value_t = 4)]
    up_to: usize,
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
    level_cap: usize,
}

pub fn rates(g: &Global, a: RatesArgs) -> CliResult {
    let d = a.diagram.as_deref().map(|s| input::diagram(s, a.up_to, g.cap)).transpose()?;
    let src = input::source(&a.source, d.as_ref(), a.up_to, g.cap)?;
    let mut table = src.to_table(a.up_to, g.cap)?;
    if table.indexing().is_none() {
        let idx = Indexing::lex(table.diagram())?;
        table = table.with_indexing(idx)?;
    }
    let array = EncoderArray::for_source(&table, a.level_cap)?;
    let rows = rate_trace(&array, &table, a.up_to)?;
    let mut w = csv_writer(g.out.as_deref())?;
    w.write_record([
        "n",
        "rate_bits_per_symbol",
        "approximant_bits_per_symbol",
        "redundancy_bits",
        "header_bits_per_symbol",
        "best_row_rate_bits_per_symbol",
    ])?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            num(r.rate),
            num(r.approximant),
            num(r.redundancy),
            num(r.header),
            num(r.best_row_rate),
        ])?;
    }
    w.flush()?;
    Ok(())
}
