use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field cardinality {0}: need a prime below 2^16 or one of 4, 8, 9, 16, 25, 27, 32")]
    UnsupportedCardinality(u64),
    #[error("wedge of grades {left} and {right} exceeds ambient dimension {n}")]
    GradeOverflow { left: usize, right: usize, n: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("frame does not consist of n lines spanning the ambient space")]
    DegenerateFrame,
    #[error("sequence is not in T_(q,n): {0}")]
    NotInT(String),
    #[error("face coefficient outside the face value of the local system (simplex {0:?})")]
    MonotonicityViolation(Vec<u32>),
    #[error("simplicial map does not preserve vertex order on {0:?}")]
    OrderViolation(Vec<u32>),
    #[error("vectors violate the general-position condition: {0}")]
    DependenceViolation(String),
    #[error("evaluation point {0} is a pole")]
    PoleHit(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
