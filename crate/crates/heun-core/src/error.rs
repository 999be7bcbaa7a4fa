//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by polynomial algebra, spectral computations and the
/// dynamical solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A variable label was used that is not part of a polynomial's alphabet.
    #[error("unknown variable `{0}` (alphabet is {1:?})")]
    UnknownVariable(String, (String, String)),

    /// Two polynomials were combined whose variable alphabets disagree.
    #[error("variable alphabets disagree: {0:?} vs {1:?}")]
    AlphabetMismatch((String, String), (String, String)),

    /// Tridiagonal input arrays had inconsistent lengths.
    #[error("tridiagonal matrix of order {n} needs {expected} off-diagonal entries, got {got}")]
    BadTridiagShape { n: usize, expected: usize, got: usize },

    /// Resultant of two polynomials that are both constant in the eliminated
    /// variable is not defined here.
    #[error("resultant undefined: both inputs have degree 0 in the eliminated variable")]
    ResultantBothConstant,

    /// A polynomial expected to be univariate in one variable involved the other.
    #[error("polynomial is not univariate in `{0}`")]
    NotUnivariate(String),

    /// Internal exact-division failure; indicates a bug in a caller.
    #[error("exact polynomial division left a nonzero remainder")]
    InexactDivision,

    /// An input parameter was outside the documented domain.
    #[error("invalid input: {0}")]
    Domain(String),

    /// An iterative numerical procedure failed to converge or broke down.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two redundant computations of the same quantity disagreed beyond
    /// tolerance; the result cannot be trusted.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    /// Writing an output artifact failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
