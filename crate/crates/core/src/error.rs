use thiserror::Error;

/// Errors raised by the density engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{op} is undefined for the zero ideal")]
    ZeroIdeal { op: &'static str },

    #[error("colon by the zero ideal is undefined")]
    ColonByZero,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix has rank < 2: {0}")]
    RankDeficient(String),

    #[error("fit failed ({context}): {diagnostics}")]
    FitFailure { context: String, diagnostics: String },

    #[error("n = {n} lies beyond the verified stabilization window (verified up to {verified_up_to})")]
    UnverifiedRegion { n: u64, verified_up_to: u64 },

    #[error("structural check failed: {0}")]
    Structural(String),
}

impl Error {
    /// True for errors that come from the numerical engine rather than from
    /// malformed input. The CLI maps these to exit status 2.
    pub fn is_computation_failure(&self) -> bool {
        matches!(
            self,
            Error::FitFailure { .. } | Error::UnverifiedRegion { .. } | Error::Structural(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
