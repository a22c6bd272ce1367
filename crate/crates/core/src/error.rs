use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("product of degree {degree} exceeds truncation {truncation}")]
    TruncationExceeded { degree: i64, truncation: i64 },
    #[error("operands belong to different algebras ({left} vs {right})")]
    MixedAlgebra { left: String, right: String },
    #[error("word `{word}` has no declared degree-0 corner")]
    MissingCorner { word: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid construction: {0}")]
    Invalid(String),
    #[error("monodromy value {value} for `{word}` is not a unit of the ground ring")]
    NotAUnit { word: String, value: String },
    #[error("cocycle is not action-monotone: entry {from} -> {to} does not decrease action")]
    NotActionMonotone { from: String, to: String },
    #[error("generators carry no action values")]
    ActionsMissing,
    #[error("D^2 != 0 in degree {degree}: entry ({row}, {col}) = {value}")]
    DifferentialNotSquareZero {
        degree: i64,
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("chain is not a cycle{0}")]
    NotACycle(String),
    #[error("generator `{0}` is not of maximal degree")]
    NotTopDegree(String),
    #[error("chain map identity fails in degree {degree}: D-Psi != Psi D+ at ({row}, {col})")]
    ChainMapViolation { degree: i64, row: usize, col: usize },
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("degree-0 action does not descend to homology: {0}")]
    ActionNotDescending(String),
    #[error("coefficient {0} is not an integer; use the rational mode")]
    NonIntegral(String),
    #[error("truncation {truncation} too small, need at least {needed}")]
    TruncationTooSmall { truncation: i64, needed: i64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
