use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree must be at least 1")]
    DegenerateDegree,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a signed permutation matrix: {0}")]
    NotSignedPermutationMatrix(String),

    #[error("degree {degree} exceeds the enumeration cap {cap}")]
    ResourceLimit { degree: usize, cap: usize },

    #[error("index ({i}, {j}) out of range for degree {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("matrix is singular or nearly singular (|det| = {det_abs:e})")]
    NotInvertible { det_abs: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not orthogonal (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("diagonal entry {index} is not positive ({value})")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("diagonal product is {product}, expected 1")]
    ProductNotOne { product: f64 },

    #[error("determinant is {det}, expected 1")]
    DeterminantNotOne { det: f64 },

    #[error("no root found within budget (best residual {best_residual:e})")]
    NoRootFound { best_residual: f64 },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("generators have mixed degrees")]
    MixedDegrees,

    #[error("element cap must be at least 1")]
    ZeroCap,

    #[error("closure table was truncated at its cap")]
    Truncated,

    #[error("subgroup is not contained in the group")]
    NotContained,

    #[error("group order {whole} is not divisible by {sub}")]
    NotDivisible { whole: usize, sub: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
