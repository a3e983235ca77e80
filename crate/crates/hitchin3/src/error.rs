use thiserror::Error;

/// Errors produced by the library.
///
/// Absence of a cube root is *not* an error (the root extractors return
/// `Option`); the variants here are genuine failure states.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("the zero polynomial has no zero count")]
    ZeroPolynomial,

    #[error("invalid puncture {puncture} for surface {surface}")]
    InvalidPuncture { puncture: String, surface: String },

    /// The input data is consistent over C but its canonical witness has
    /// coefficients outside Q(i, 2^(1/3)) or outside the supported cube-root
    /// search class.
    #[error("coefficient field too small: {0}")]
    FieldTooSmall(String),

    /// An identity that holds as a theorem failed symbolically; this always
    /// indicates an arithmetic bug, never bad input.
    #[error("identity violated: {0}")]
    IdentityViolated(String),

    /// An operation was invoked outside the hypothesis it encodes
    /// (e.g. the stability test with no interior zeros).
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {offset}: expected {expected}, found {found}")]
    Parse {
        offset: usize,
        expected: String,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code bucket for the CLI: 2 for input problems,
    /// 3 for internal identity violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::IdentityViolated(_) | Error::HypothesisViolated(_) => 3,
            _ => 2,
        }
    }
}
