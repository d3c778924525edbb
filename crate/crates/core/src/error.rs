use thiserror::Error;

/// Errors raised by construction, search, measures and the theory oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}{}", row_suffix(.row))]
    DimensionMismatch {
        expected: usize,
        found: usize,
        /// Offending row, 0-based. `None` when two whole sets disagree.
        row: Option<usize>,
    },
    #[error("non-finite coordinate at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("point set needs at least 2 points, got {m}")]
    TooSmall { m: usize },
    #[error("k = {k} is out of range 1..={max}")]
    KTooLarge { k: usize, max: usize },
    #[error("unequal sample sizes: empirical has {empirical} points, generated has {generated}")]
    UnequalSampleSizes { empirical: usize, generated: usize },
    #[error("rho must lie in (0, 1], got {0}")]
    InvalidRho(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge: error estimate {error:e} above tolerance {tolerance:e} after {evaluations} evaluations")]
    QuadratureNotConverged {
        error: f64,
        tolerance: f64,
        evaluations: usize,
    },
}

fn row_suffix(row: &Option<usize>) -> String {
    row.map(|r| format!(" at row {r}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn set_dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            expected,
            found,
            row: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
