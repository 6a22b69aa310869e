use thiserror::Error;

use crate::roots::Weight;

#[derive(Debug, Error)]
pub enum HrError {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("simple root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Gram block at weight {0} is singular")]
    SingularGram(Weight),
    #[error("Gram block at weight {weight} is not unimodular (valuation {valuation})")]
    NotUnimodular { weight: Weight, valuation: i64 },
    #[error("weight {0} is not dominant")]
    NonDominant(Weight),
    #[error("an explicit depth is required: {0}")]
    DepthRequired(String),
    #[error("operation needs a {0}")]
    WrongRing(String),
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, HrError>;
