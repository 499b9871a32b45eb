use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state must contain at least one finite amplitude")]
    EmptyState,
    #[error("unknown stencil order {0} (expected 1 or 10)")]
    UnknownOrder(u32),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("length {n} too small: need more than {min} elements")]
    SizeTooSmall { n: usize, min: usize },
    #[error("embedding does not match operator: {0}")]
    SpecMismatch(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("symmetric eigensolver did not converge")]
    EigSolverFailure,
    #[error("transition rates are not Hermitian: {0}")]
    NonHermitian(String),
    #[error("node {node} outside the node range {min}..={max}")]
    NodeOutOfRange { node: i64, min: i64, max: i64 },
    #[error("rate matrix is not conservative: row {row} sums to {sum:e}")]
    NonConservative { row: usize, sum: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
