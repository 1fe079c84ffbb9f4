use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Gegenbauer index gamma = {0} (must exceed -1/2)")]
    InvalidGegenbauerIndex(f64),
    #[error("invalid Jacobi index (alpha, beta) = ({0}, {1}) (both must exceed -1)")]
    InvalidJacobiIndex(f64, f64),
    #[error("{what} = {got} is too small (minimum {min})")]
    TooSmall {
        what: &'static str,
        got: usize,
        min: usize,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("eigenvalue iteration failed to converge (index {0})")]
    NoConvergence(usize),
    #[error("singular B matrix in the {0} pencil")]
    SingularPencil(&'static str),
    #[error("variant {variant} requires gamma = {required}, got {got}")]
    VariantIndexMismatch {
        variant: &'static str,
        required: f64,
        got: f64,
    },
    #[error("unknown {kind} '{value}'")]
    UnknownTag { kind: &'static str, value: String },
    #[error("polynomial degrees {0} and {1} do not form a pair (need deg2 in {{deg1 - 1, deg1}})")]
    DegreeMismatch(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid {what}: {value}")]
    InvalidArgument { what: &'static str, value: f64 },
    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
