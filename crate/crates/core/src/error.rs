use thiserror::Error;

use crate::base::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("window size must be at least {min}, got {got}")]
    InvalidWindow { got: usize, min: usize },

    #[error("index 0 is not a valid basis index (indices are 1-based)")]
    ZeroIndex,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no nondegenerate complement of dimension {needed} inside window {window} (rank reached {rank})")]
    DegenerateWithinWindow {
        needed: usize,
        rank: usize,
        window: usize,
    },

    #[error("step {step}: no pairing partner found among w_1..w_{bound}")]
    NondegeneracySearchExhausted { step: usize, bound: usize },

    #[error("Krylov span did not stabilize within {cutoff} steps (dimension so far {dim})")]
    CutoffReached { dim: usize, cutoff: usize },

    #[error("generator E_({i},{j}) does not annihilate the element")]
    AnnihilationFailure { i: usize, j: usize },

    #[error("g and g_inv are not mutually inverse")]
    NotInverse,

    #[error("h(E_({i},{j})) is not finitary; input is not an automorphism of the Mackey algebra")]
    NotFinitaryImage { i: usize, j: usize },

    #[error("classification inconclusive up to window {max_window}")]
    Inconclusive { max_window: usize },

    #[error("trace is undefined for the non-finitary operator (diagonal tail {tail})")]
    TraceUndefined { tail: Rational },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
