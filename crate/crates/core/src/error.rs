use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {p}^{m}")]
    NotInvertible { value: String, p: u64, m: u32 },

    #[error("{value} is not {p}-integral")]
    NotPIntegral { value: String, p: u64 },

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("resource limit exceeded: {what} ({requested} > {limit})")]
    ResourceLimit {
        what: &'static str,
        requested: String,
        limit: String,
    },

    #[error("extremal polynomial b_{{{j},{n}}} has degree {degree} > {bound}")]
    DegreeAssertion {
        j: usize,
        n: usize,
        degree: usize,
        bound: usize,
    },

    #[error("extremal polynomial b_{{{j},{n}}} has a non-integer coefficient")]
    IntegralityAssertion { j: usize, n: usize },

    #[error("B_{m} has {p} in its denominator")]
    PoleAtP { m: u64, p: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is not supported by this check")]
    UnsupportedPrime(u64),

    #[error("prime {p} divides the denominator of c_{index}")]
    BadPrime { p: u64, index: usize },

    #[error("prime {p} is below the required minimum {min}")]
    PrimeTooSmall { p: u64, min: u64 },

    #[error("prime {p} is outside the range of `{tag}` (requires {range})")]
    PrimeOutOfRange { tag: String, p: u64, range: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "classification mismatch at (n={n}, k={k}, p={p}): predicted {predicted}, measured exceptional={measured}"
    )]
    ClassificationMismatch {
        n: u32,
        k: i64,
        p: u64,
        predicted: String,
        measured: bool,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint {path} was written for a different configuration")]
    ResumeMismatch { path: PathBuf },

    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse {
        line: u64,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
