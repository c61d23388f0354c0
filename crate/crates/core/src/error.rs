use std::io;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol specification `{0}`")]
    InvalidSymbol(String),

    #[error("symbol is not increasing on [0, pi]: f(0) = {f0}, f(pi) = {fpi}")]
    NonMonotoneSymbol { f0: f64, fpi: f64 },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    ConvergenceFailure { index: usize, iterations: usize },

    #[error("invalid extrapolation grid: {0}")]
    InvalidGrid(String),

    #[error("singular extrapolation system at node {node}")]
    SingularSystem { node: usize },

    #[error("level {level} is outside 1..={alpha}")]
    InvalidLevel { level: usize, alpha: usize },

    #[error("no levels requested")]
    EmptyLevels,

    #[error("operation requires a KMS symbol, got `{0}`")]
    UnsupportedSymbol(String),

    #[error("no reference spectrum for n = {n}: dense solves are limited to n <= {ceiling}")]
    InfeasibleReference { n: usize, ceiling: usize },

    #[error("spectrum has length {got}, expected {expected}")]
    SpectrumLength { expected: usize, got: usize },

    #[error("malformed coefficient table at line {line}: {message}")]
    TableFormat { line: usize, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
