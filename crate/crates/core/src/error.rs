use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("linear system has no solution")]
    Unsat,

    #[error("infeasible instance spec: {0}")]
    Infeasible(String),

    #[error("{what} out of range: {value} (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is not in row echelon form: {0}")]
    Structure(String),

    #[error("circuit still contains a SWAP gate at position {0}; lower it first")]
    UnloweredGate(usize),

    #[error("state vector limited to {limit} qubits, circuit has {found}")]
    SizeLimit { limit: usize, found: usize },

    #[error("row {row} has weight {weight}, expected 3")]
    RowWeight { row: usize, weight: usize },

    #[error("measured outcomes have zero probability")]
    ImpossibleOutcome,

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
