use thiserror::Error;

/// Everything that can go wrong while building or interrogating an object.
///
/// `NoSolution`-style outcomes of solvers are not errors: they are ordinary
/// verdicts carried by the result types. Errors mean the input is malformed,
/// violates a declared invariant, or asks for something outside the window
/// the computation can certify.
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("automorphism order mismatch: {0}")]
    AutomorphismOrder(String),

    #[error("inconsistent construction data: {0}")]
    Consistency(String),

    #[error("not free over the declared left basis at degree {degree}: {detail}")]
    Freeness { degree: i64, detail: String },

    #[error("product of window elements lands in unverified degree {degree}")]
    ClosureEscape { degree: i64 },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("hypothesis not verified: {0}")]
    HypothesisUnverified(String),

    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
