use thiserror::Error;

use crate::normalize::SwapKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("type mismatch at level {level}, position {position}")]
    TypeMismatch { level: usize, position: usize },
    #[error("levels {index} and {} are not swappable by {kind:?}", index + 1)]
    NotSwappable { index: usize, kind: SwapKind },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("oracle overflow: class exceeds {cap} diagrams")]
    OracleOverflow { cap: usize },
    #[error("diagram is not admissible: {0}")]
    NotAdmissible(String),
    #[error("illegal gluing position: {0}")]
    IllegalPosition(String),
    #[error("anchor mismatch: {0}")]
    AnchorMismatch(String),
    #[error("tiling is not rectangular")]
    NotRectangular,
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
