//! Information sources on regular Bratteli diagrams.

pub mod builtin;
pub mod coding;
pub mod diagram;
pub mod error;
pub mod grid;
pub mod lossy;
pub mod rng;
pub mod source;
pub mod vershik;

pub use error::{Error, Result};
