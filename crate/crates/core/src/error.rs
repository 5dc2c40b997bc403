use thiserror::Error;

/// Errors produced by the algebra, representation and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("deformation parameter q = {0} must satisfy 0 < q < 1")]
    InvalidQ(f64),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeOverflow { degree: u32, max: u32 },

    #[error("module decomposition needs odd input, found even monomial {0}")]
    EvenParity(String),

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("Gram matrix of sector ({c1}, {c2}) is numerically singular at depth {depth}")]
    SingularGram { c1: i32, c2: i32, depth: usize },

    #[error("degree guard violated: element of degree {degree} needs l <= {limit}")]
    DegreeGuard { degree: u32, limit: String },

    #[error("covering certification failed at {0}")]
    CoveringFailed(String),

    #[error("grading is not a homomorphism on Z_{n} x Z_{n}: {detail}")]
    GradingNotHomomorphic { n: usize, detail: String },

    #[error("invalid theta: {0}")]
    InvalidTheta(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
