use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands carry different deformation matrices")]
    ThetaMismatch,

    #[error("theta matrix is not skew-symmetric at entry ({row}, {col})")]
    NotSkewSymmetric { row: usize, col: usize },

    #[error("theta matrix is not square")]
    NotSquare,

    #[error("theta entry ({row}, {col}) is not finite")]
    NonFiniteTheta { row: usize, col: usize },

    #[error("monomial exponent overflow")]
    ExponentOverflow,

    #[error("denominator must be positive")]
    ZeroDenominator,

    #[error("operation requires N = 2, found N = {0}")]
    RequiresRankTwo(usize),

    #[error("spin structure entries must be 0 or 1, found {0}")]
    InvalidSpinBit(u8),

    #[error("sign vector entries must be +1 or -1, found {0}")]
    InvalidSign(i8),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("spin structures of the operands differ")]
    SpinMismatch,

    #[error("tensor term is not invariant under the combined torus action")]
    NotInvariant,

    #[error("element lies outside the embedded image of the base algebra")]
    NotInImage,

    #[error("invalid serialized element: {0}")]
    Format(String),
}
