use thiserror::Error;

use crate::hring::NotEntireWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("not entire: {0}")]
    NotEntire(NotEntireWitness),
    #[error("floating-point overflow: {0}")]
    Overflow(String),
    #[error("both arguments are zero")]
    BothZero,
    #[error("not divisible ({step}): {detail}")]
    NotDivisible { step: DivideStep, detail: String },
    #[error("no Bezout identity with Q(i) coefficients: {0}")]
    NoRationalBezout(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero on or near the contour; retry with rectangle {suggested:?}")]
    BoundaryZero { suggested: [f64; 4] },
    #[error("no convergence on [{:.6},{:.6}]x[{:.6},{:.6}]: {reason}", .rect[0], .rect[1], .rect[2], .rect[3])]
    NonConvergence { rect: [f64; 4], reason: String },
    #[error("equation is not in retarded normal form: {0}")]
    NotRetarded(String),
    #[error("series truncated at order {have}, need more than {need}")]
    TruncationTooShort { have: usize, need: usize },
    #[error("regularized integral did not stabilize: {0}")]
    QuadratureDivergence(String),
    #[error("no envelope with N <= {cap} dominates the samples")]
    EnvelopeCapExceeded { cap: u32 },
    #[error("growth envelope violated: {0}")]
    EnvelopeViolation(String),
    #[error("duplicate interpolation node at index {0}")]
    DuplicateNode(usize),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("denominator is not a polynomial in z: {0}")]
    NonPolynomialDenominator(String),
    #[error("schema violation at {path}: {msg}")]
    SchemaViolation { path: String, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivideStep {
    SigmaDivision,
    Entirety,
}

impl std::fmt::Display for DivideStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivideStep::SigmaDivision => f.write_str("sigma-division"),
            DivideStep::Entirety => f.write_str("entirety"),
        }
    }
}

impl Error {
    /// Distinct process exit code per error family.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } => 2,
            Error::NonPolynomialDenominator(_) => 3,
            Error::NotEntire(_) | Error::ZeroDenominator => 4,
            Error::DivisionByZero | Error::BothZero => 5,
            Error::NotDivisible { .. } => 6,
            Error::NoRationalBezout(_) => 7,
            Error::DimensionMismatch(_) => 8,
            Error::BoundaryZero { .. } | Error::NonConvergence { .. } => 9,
            Error::NotRetarded(_) => 10,
            Error::TruncationTooShort { .. } => 11,
            Error::QuadratureDivergence(_) => 12,
            Error::EnvelopeCapExceeded { .. } | Error::EnvelopeViolation(_) => 13,
            Error::DuplicateNode(_) => 14,
            Error::SchemaViolation { .. } => 15,
            Error::Config(_) => 16,
            Error::Overflow(_) => 17,
            Error::Internal(_) => 70,
        }
    }
}
