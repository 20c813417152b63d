use thiserror::Error;

use crate::lattice::Violation;

/// Errors raised across the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid device: {}", format_violations(.0))]
    InvalidDevice(Vec<Violation>),

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("eigensolver failed to converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("pole reached: {0}")]
    Pole(String),

    #[error("degenerate solutions: Wronskian vanishes at x = {0}")]
    DegenerateSolutions(f64),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),

    #[error("config syntax error at line {line}, column {column}: {message}")]
    ConfigSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config error in section [{section}]: {message}")]
    ConfigSemantic { section: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
