use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {d}^{n} amplitudes is more than the limit of {limit}")]
    Capacity { n: usize, d: usize, limit: usize },

    #[error("shape mismatch: expected {expected} amplitudes for d={d}, n={n}, found {found}")]
    ShapeMismatch {
        n: usize,
        d: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not unitary: ||U^dag U - I||_F = {defect:e} exceeds {tolerance:e}")]
    NonUnitary { defect: f64, tolerance: f64 },

    #[error("norm violation: computed norm {norm} differs from 1 by more than {tolerance:e}")]
    NormViolation { norm: f64, tolerance: f64 },

    #[error("AME check needs {required} subsets, which exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("unsupported file format version {found} (expected {expected})")]
    UnsupportedVersion { found: u64, expected: u64 },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
