//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero element has no inverse")]
    ZeroElement,
    #[error("element is not invertible; the curve polynomial is reducible (gcd has degree {0})")]
    NotInvertible(usize),
    #[error("point does not lie on the curve")]
    PointNotOnCurve,
    #[error("tau-form must be canonicalized first")]
    FormNotCanonical,
    #[error("coefficient of the form has a pole at the evaluation point")]
    EvaluationPole,
    #[error("form is fiber-constant (zero Kahler part)")]
    FiberConstantForm,
    #[error("form has zero d^tau x coefficient after canonicalization")]
    DegenerateForm,
    #[error("derivation is inconsistent with the curve relation")]
    InconsistentDerivation,
    #[error("the supplied form coefficient is zero")]
    ZeroForm,
    #[error("search is not applicable: {0}")]
    NotApplicable(String),
    #[error("resource budget exceeded after {steps} steps")]
    ResourceBudgetExceeded { steps: u64 },
    #[error("curve polynomial is not squarefree")]
    NotSquarefree,
    #[error("hyperelliptic model must have even degree 2g+2 with g >= 1, got degree {0}")]
    BadHyperellipticDegree(usize),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }

    pub fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Syntax { line, col, msg: msg.into() }
    }

    /// Process exit status for the CLI contract: 2 for parse errors, 1 for
    /// domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::UnknownSymbol(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
