use std::path::Path;

use bratteli::builtin::{load_diagram, load_source, AnySource};
use bratteli::diagram::Diagram;

use crate::{CliError, CliResult};

/// The argument itself, or the contents of the file it names.
pub fn text_or_file(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn diagram(arg: &str, levels: usize, cap: u128) -> CliResult<Diagram> {
    Ok(load_diagram(&text_or_file(arg)?, levels, cap)?)
}

pub fn source(arg: &str, diagram: Option<&Diagram>, levels: usize, cap: u128) -> CliResult<AnySource> {
    Ok(load_source(&text_or_file(arg)?, diagram, levels, cap)?)
}

/// Comma- or whitespace-separated numbers.
pub fn numbers<T: std::str::FromStr>(list: &str, what: &str) -> CliResult<Vec<T>> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| CliError::Input(format!("{what}: cannot parse `{s}`"))))
        .collect()
}
