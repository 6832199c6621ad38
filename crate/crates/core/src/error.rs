use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a bijection on 0..{degree}: {images:?}")]
    NotABijection { degree: usize, images: Vec<usize> },
    #[error("permutation degree must be at least 1")]
    EmptyPermutation,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("duplicate point {0} in tuple")]
    DuplicatePoint(usize),
    #[error("generated group exceeds the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("permutation {0} is not an element of the group")]
    NotInGroup(String),
    #[error("distributions live on different groups")]
    GroupMismatch,
    #[error("empty subset")]
    EmptySubset,
    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("support of {which} is not confined to the required subgroup")]
    SupportViolation { which: &'static str },
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("not majorized: {0}")]
    NotMajorized(String),
    #[error("not doubly stochastic: {0}")]
    NotDoublyStochastic(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("tuple length {q} out of range 1..={m}")]
    TupleLength { q: usize, m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
