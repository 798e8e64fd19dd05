use thiserror::Error;

/// Errors raised by kernel, measure, and experiment operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid measure: {0}")]
    Measure(String),

    #[error("degenerate measure: {0}")]
    Degenerate(String),

    #[error("combined support of {size} atoms exceeds the limit of {limit}")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("candidate budget of {budget} exhausted before point {index} of {n} could be placed")]
    SearchExhausted {
        index: usize,
        n: usize,
        budget: usize,
    },

    #[error("measure is not annihilated by the kernel: norm {norm:e} exceeds tolerance {tol:e}")]
    NotAWitness { norm: f64, tol: f64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
