use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("word length {len} is not a multiple of k = {k}")]
    WordLength { len: usize, k: usize },

    #[error("symbol at position {position} occurs {count} times, expected {k}")]
    Multiplicity {
        position: usize,
        count: usize,
        k: usize,
    },

    #[error("word is not in canonical first-occurrence form")]
    NotCanonical,

    #[error("diagram has {crossed} crossed or non-free chords; lattice path encoding needs a non-crossing diagram")]
    NotNonCrossing { crossed: usize },

    #[error("series truncation orders differ: {left:?} vs {right:?}")]
    OrderMismatch { left: [usize; 2], right: [usize; 2] },

    #[error("negative-binomial expansion needs a series with zero constant term")]
    NonzeroConstantTerm,

    #[error("enumeration of {required} configurations exceeds the budget of {budget}")]
    BudgetExceeded { required: BigInt, budget: u64 },

    #[error("board has {vertices} vertices but k*n = {expected}")]
    SizeMismatch { vertices: usize, expected: usize },

    #[error("malformed edge list: {0}")]
    MalformedEdges(String),

    #[error("unknown sequence id {0}")]
    UnknownSequence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
