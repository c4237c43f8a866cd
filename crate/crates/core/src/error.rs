use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature ({p},{q}): need 1 <= p+q <= {max}")]
    InvalidSignature { p: usize, q: usize, max: usize },
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("expected a grade-1 element, got {0}")]
    NotVector(String),
    #[error("element is not in the Lipschitz group")]
    NotLipschitz,
    #[error("matrix is not orthogonal for the quadratic form")]
    NotOrthogonal,
    #[error("matrix is not a Vahlen matrix")]
    NotVahlen,
    #[error("cx+d is not invertible at the given point")]
    DenominatorNotInvertible,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("null vector components do not satisfy the null-cone equation or are all zero")]
    MalformedPoint,
    #[error("pair has zero image under gamma")]
    ZeroImage,
    #[error("degenerate conformal point")]
    Degenerate,
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("grade error: {0}")]
    Grade(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("chamber mismatch: {0}")]
    ChamberMismatch(String),
    #[error("power does not resolve to a rational: {0}")]
    InexactPower(String),
    #[error("chamber does not declare a sign for base {0}")]
    ChamberIncomplete(String),
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
