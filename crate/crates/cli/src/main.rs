//! `bratteli`: command-line access to diagrams, sources, coding schemes,
//! Kuhn curves, Vershik orbits, SMB statistics and lossy rates.
//!
//! Exit codes: 0 success, 1 validation failure, 2 cap or budget exceeded,
//! 3 input that could not be read or parsed.

mod analysis;
mod coding;
mod curve;
mod input;
mod output;
mod structure;

use std::path::PathBuf;
use std::process::ExitCode;

use bratteli::rng::DEFAULT_SEED;
use bratteli::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bratteli", version, about = "Bratteli-Vershik sources, codes and dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

/// Options shared by every subcommand.
#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, env = "BVS_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest number of vertices or strings materialized for one level.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub cap: u128,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a diagram for regularity, or a source for consistency.
    Check(structure::CheckArgs),
    /// Print the canonical string of every vertex.
    Canonicalize(structure::CanonicalizeArgs),
    /// Push a PMF down a diagram by edge transport.
    Transport(structure::TransportArgs),
    /// Level entropies and entropy-rate approximants of a source.
    Entropy(analysis::EntropyArgs),
    /// Encode vertices or a text with the universal scheme.
    Encode(coding::EncodeArgs),
    /// Decode a bitstream produced by `encode`.
    Decode(coding::DecodeArgs),
    /// Rate trace of the universal scheme against a source.
    Rates(coding::RatesArgs),
    /// Entropy curve of the Kuhn source family.
    KuhnCurve(curve::KuhnCurveArgs),
    /// Walk the Vershik orbit of a cylinder and sum the SMB integrand.
    Orbit(analysis::OrbitArgs),
    /// Monte Carlo SMB statistics.
    Smb(analysis::SmbArgs),
    /// Fixed-length lossy rate trace and its limiting bounds.
    Lossy(analysis::LossyArgs),
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    /// A check ran and found a violation.
    Validation(String),
    /// Input that could not be read or understood.
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded { .. } | Error::Budget { .. }) => 2,
            CliError::Core(Error::Parse(_)) | CliError::Input(_) => 3,
            CliError::Core(_) | CliError::Validation(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Validation(m) | CliError::Input(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T = ()> = std::result::Result<T, CliError>;

fn run(cli: Cli) -> CliResult {
    let g = &cli.global;
    match cli.command {
        Command::Check(a) => structure::check(g, a),
        Command::Canonicalize(a) => structure::canonicalize(g, a),
        Command::Transport(a) => structure::transport(g, a),
        Command::Entropy(a) => analysis::entropy(g, a),
        Command::Encode(a) => coding::encode(g, a),
        Command::Decode(a) => coding::decode(g, a),
        Command::Rates(a) => coding::rates(g, a),
        Command::KuhnCurve(a) => curve::kuhn_curve(g, a),
        Command::Orbit(a) => analysis::orbit(g, a),
        Command::Smb(a) => analysis::smb(g, a),
        Command::Lossy(a) => analysis::lossy(g, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
