use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema violation: {0}")]
    Schema(String),

    /// A construction produced (or was handed) data violating a structural
    /// identity such as `d^2 = 0`. `degree` is the first failing degree.
    #[error("invariant violated at degree {degree}: {what}")]
    Invariant { what: String, degree: i64 },

    #[error("Maurer-Cartan equation fails: {0}")]
    MaurerCartanViolation(String),

    #[error("morphism is not closed")]
    NotClosed,

    #[error("morphism has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },

    #[error("objects live over different algebras")]
    AlgebraMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tensor factors are on the wrong sides: {0}")]
    SideMismatch(String),

    #[error("object is not {d}-spherical: endomorphism dims {dims}")]
    NotSpherical { d: i64, dims: String },

    #[error("no square-zero cochain representative of the degree-{0} endomorphism class")]
    NoStrictRepresentative(i64),

    #[error("algebra carries no Frobenius certificate of dimension {0}")]
    MissingFrobenius(i64),

    #[error("twist power must be nonzero")]
    ZeroPower,

    #[error("objects are isomorphic up to shift (l = {0})")]
    NotDistinct(i64),

    #[error("group-theoretic statements need d > 1, got d = {0}")]
    DNotGreaterThanOne(i64),

    #[error("lambda must be invertible")]
    ZeroLambda,

    #[error("ping-pong certificate fails at word {word}: {reason}")]
    CertificateFailure { word: String, reason: String },

    #[error("word {word} exceeded the size cap ({size} > {cap} summands)")]
    SizeCap { word: String, size: usize, cap: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}
