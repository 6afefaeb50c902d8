//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Error`]. The variants are
//! grouped so the CLI can map them onto distinct exit codes: configuration
//! problems, data/parse problems, and numerical failures.

use thiserror::Error;

/// Unified error type for all fuzzyshrink operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition (for example a
    /// non-positive shrinkage constant, or an alpha level outside `(0, 1]`).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A vector or matrix had the wrong length for the operation.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The design matrix is rank deficient, so no unique fit exists.
    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    /// Resampled or user data was too degenerate to fit (for example every
    /// bootstrap redraw came back rank deficient).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// A CSV cell or header could not be interpreted. Row numbers count data
    /// rows from 1; the header is row 0.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// The requested built-in dataset does not exist.
    #[error("unknown builtin dataset: {0}")]
    UnknownBuiltin(String),

    /// The requested fixture model does not exist for the selected dataset.
    #[error("unknown fixture model: {0}")]
    UnknownFixture(String),

    /// An internal invariant failed; indicates a bug in this crate.
    #[error("internal error: {0}")]
    Internal(String),

    /// Underlying I/O failure while reading or writing files.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Broad classification used by the CLI to pick an exit code.
    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Parse { .. }
            | Error::UnknownBuiltin(_)
            | Error::UnknownFixture(_)
            | Error::Io(_) => ExitClass::Data,
            Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::SingularDesign(_)
            | Error::DegenerateData(_)
            | Error::Internal(_) => ExitClass::Numerical,
        }
    }
}

/// Exit-code classes for the command-line driver.
///
/// Usage errors (bad flags, contradictory options) are handled before an
/// [`Error`] is ever constructed and exit with code 2; these two classes cover
/// everything that can go wrong after argument parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    /// Problems with input data: exit code 3.
    Data,
    /// Numerical or domain failures: exit code 4.
    Numerical,
}

impl ExitClass {
    /// The process exit code for this class.
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Data => 3,
            ExitClass::Numerical => 4,
        }
    }
}
