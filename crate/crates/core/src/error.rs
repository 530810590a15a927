use thiserror::Error;

use crate::dyadic::Dyadic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("simplest number requested between {lo} and {hi}, but lo >= hi")]
    BoundsViolation { lo: Dyadic, hi: Dyadic },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("position is not a number: max left value {left} >= min right value {right}")]
    NotANumber { left: Dyadic, right: Dyadic },

    #[error("node budget of {budget} exhausted")]
    ResourceLimit { budget: u64 },

    #[error("cell ({i},{j}) lies outside the bar")]
    OutOfBounds { i: i64, j: i64 },

    #[error("illegal cut: {0}")]
    IllegalCut(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("wrong turn: {0}")]
    WrongTurn(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
