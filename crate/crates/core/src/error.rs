use thiserror::Error;

/// Errors raised across the crate.
///
/// Vertices are reported as `level:ordinal`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level {0} has no vertices")]
    EmptyLevel(usize),
    #[error("vertex {level}:{ordinal} is not the source of any edge")]
    OrphanVertex { level: usize, ordinal: usize },
    #[error("vertex {level}:{ordinal} has an empty source multiset")]
    EmptyMultiset { level: usize, ordinal: usize },
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("diagram is not regular: {0}")]
    NotRegular(String),
    #[error("{what} needs {size} entries, above the cap of {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("invalid PMF: {0}")]
    InvalidPmf(String),
    #[error("mixture weights sum to {0}, not 1")]
    WeightSum(f64),
    #[error("marginals are not stationary at level {level} (deviation {deviation:.3e})")]
    NotStationary { level: usize, deviation: f64 },
    #[error("bit string is not a codeword")]
    InvalidCodeword,
    #[error("bit string ends inside a codeword")]
    TruncatedInput,
    #[error("no code of order {0} is available in the scheme")]
    MissingOrder(usize),
    #[error("point outside the grid domain: {0}")]
    OutOfDomain(String),
    #[error("grid is not admissible at {0}")]
    NotAdmissible(String),
    #[error("index {index} is out of range for {digits} digits in base {beta}")]
    RangeError { index: u128, beta: usize, digits: usize },
    #[error("the all-(beta-1) address has no successor at this length")]
    FinalAddress,
    #[error("operands differ in base or length")]
    Mismatch,
    #[error("the final path has no successor")]
    FinalPath,
    #[error("path truncation is too shallow for this operation")]
    TruncationTooShallow,
    #[error("source has no sampler at level {0}")]
    NoSampler(usize),
    #[error("vertex at level {0} has zero probability")]
    ZeroProbabilityVertex(usize),
    #[error("operation needs {needed} steps, above the budget of {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("entropy rate of a mixture component is unknown")]
    UnknownRate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
