use thiserror::Error;

/// Errors raised by state construction and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid local dimensions: {0}")]
    InvalidDims(String),

    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),

    #[error("zero vector (norm {0:e}) cannot be normalized")]
    ZeroVector(f64),

    #[error("parties have unequal local dimensions {0:?}")]
    Heterogeneous(Vec<usize>),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid party subset: {0}")]
    InvalidParties(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("premise not satisfied: {0}")]
    Premise(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state file: {0}")]
    Format(String),
}

impl Error {
    /// Resource guard violations are reported separately from bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::SizeGuard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
