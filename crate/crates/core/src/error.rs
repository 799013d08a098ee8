use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix has rank {actual}, expected {expected}")]
    RankDeficient { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large for brute force: {0}")]
    TooLarge(String),

    #[error("budget exhausted after {attempts} attempts: {detail}")]
    BudgetExhausted { attempts: usize, detail: String },

    #[error("removing frozen positions leaves a singular automorphism")]
    ReductionBreaksInvertibility,

    #[error("matrix is not an automorphism of the code")]
    NotAnAutomorphism,

    #[error("dual-word pool too small: need {needed} words spanning the dual code, have {available}")]
    InsufficientPool { needed: usize, available: usize },

    #[error("empty Tanner graph")]
    EmptyGraph,

    #[error("automorphism ensemble is empty")]
    EmptyEnsemble,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
