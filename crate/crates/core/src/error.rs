use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("precoding matrix is not SC-aimed: {0}")]
    NotScAimed(String),

    #[error("precoding matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("invalid code description: {0}")]
    InvalidSpec(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("exhaustive enumeration needs 2^{k} codewords, above the limit of 2^{limit}")]
    GuardViolation { k: usize, limit: usize },

    #[error("minimum distance terms are unknown for {0}")]
    UnknownDistance(String),

    #[error("non-finite LLR at position {0}")]
    NonFinite(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("external spec required for {name}: {hint}")]
    ExternalSpecRequired { name: String, hint: String },

    #[error("unknown code {0:?}: not a catalog name or readable spec file")]
    UnknownCode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
