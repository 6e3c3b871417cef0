use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at x = {0}")]
    Pole(f64),

    #[error("gamma overflows at x = {0}")]
    Overflow(f64),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A kernel or operator parameter violates the admissibility restrictions.
    #[error("restriction violated: {0}")]
    Restriction(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("kernel has no term with a negative coefficient")]
    NoNegativeTerm,

    #[error("dimension {0} is not supported (maximum is {max})", max = crate::nodes::MAX_DIM)]
    Dimension(usize),

    #[error("duplicate nodes {0} and {1}")]
    DuplicateNode(usize, usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// The linear solve finished but its residual check failed.
    #[error("solve failed: {0}")]
    Solve(String),

    /// No shift exponent brought the condition number under the target.
    #[error("no shift n <= {n_max} reached cond <= {target}; best was n = {best_n} with cond = {best_cond:e}")]
    NoShiftFound {
        n_max: u32,
        target: f64,
        best_n: u32,
        best_cond: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
