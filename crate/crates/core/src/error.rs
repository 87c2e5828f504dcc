//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised while building algebras, decompositions and structures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported algebra `{0}` (expected so, su or sp)")]
    UnsupportedAlgebra(String),

    #[error("{name}({n}) is below the minimum size {min}")]
    SizeBelowMinimum { name: String, n: usize, min: usize },

    #[error("matrix is not in the span of the basis (residual {residual:e})")]
    NotInSpan { residual: f64 },

    #[error("degenerate subspace basis")]
    DegenerateSubspace,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown space `{0}`")]
    UnknownSpace(String),

    #[error("{family}: n = {n} is out of range (minimum {min})")]
    SpaceOutOfRange { family: String, n: usize, min: usize },

    #[error("Cartan subspace maximality certificate failed after {attempts} attempts")]
    CartanCertificate { attempts: usize },

    #[error("eigenvalue clusters of -ad^2 are ambiguous after {attempts} attempts")]
    ClusterAmbiguity { attempts: usize },

    #[error("root covector differs across root vectors (spread {spread:e})")]
    CovectorInconsistent { spread: f64 },

    #[error("decomposition is incomplete: {0}")]
    IncompleteDecomposition(String),

    #[error("Weyl chamber is empty")]
    EmptyChamber,

    #[error("point is outside the chart domain (j0 = {j0}, alpha = {alpha})")]
    OutsideChart { j0: usize, alpha: u8 },

    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("point lies on a chamber wall (root {root}: lambda = {value:e})")]
    OnWall { root: usize, value: f64 },

    #[error("realized coefficient `{name}` is not positive ({value})")]
    NonPositiveCoefficient { name: String, value: f64 },

    #[error("{op} is not supported in rank {rank}")]
    UnsupportedRank { op: &'static str, rank: usize },

    #[error("profile recipe requires a radius")]
    MissingRadius,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
