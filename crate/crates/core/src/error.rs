//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("not invertible in Laurent ring")]
    NotInvertible,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("point in exclusion set A")]
    ExcludedPoint,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("insufficient samples")]
    InsufficientSamples,
    #[error("inconsistent samples")]
    InconsistentSamples,
    #[error("sample points must be pairwise distinct")]
    DuplicatePoints,
    #[error("sample point in exclusion set")]
    ExcludedSample,
    #[error("pole outside A: denominator has a cyclotomic factor of order {0}")]
    PoleOutsideA(u32),
    #[error("evaluator failed at sample point: {0}")]
    EvaluatorFailure(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("mismatched algebras")]
    AlgebraMismatch,
    #[error("rank must be integer")]
    NonIntegerRank,
    #[error("element violates {0}")]
    InvalidElement(String),
    #[error("algebra validation failed: {0}")]
    InvalidAlgebra(String),
    #[error("singular degree-0 part")]
    SingularMatrix,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("point in exclusion set A")]
    ExcludedPoint,
    #[error("truncation level must be at least 1")]
    BadLevel,
    #[error("unit verification requires level N >= cutoff D")]
    LevelBelowCutoff,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LocalizeError {
    #[error("point in exclusion set A")]
    ExcludedPoint,
    #[error("parity violation on component {0}")]
    ParityViolation(String),
    #[error("missing integration functional for positive-dimensional component {0}")]
    MissingChernNumbers(String),
    #[error("normal weights must be >= 1 on component {0}")]
    NonPositiveWeight(String),
    #[error("sym expansion requires isolated components; {0} has positive dimension")]
    NonIsolated(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("chern number key {0} is not a top-degree monomial")]
    BadChernKey(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EtaError {
    #[error("point in A; use the g^k = 1 branch")]
    PointInA,
    #[error("point in exclusion set A")]
    ExcludedPoint,
    #[error("parity violation: prefactor exponent must be integral")]
    ParityViolation,
    #[error("schema violation: {0}")]
    Schema(String),
}
