use thiserror::Error;

use crate::setfun::Subset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set size {0} outside 1..={max}", max = crate::setfun::MAX_POINTS)]
    GroundSize(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("point {point} outside ground set of size {n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("subset {0} has bits outside the ground set")]
    SubsetOutOfRange(Subset),
    #[error("cannot parse subset {0:?}")]
    SubsetSyntax(String),
    #[error("set function table has length {got}, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("mixed scalar modes")]
    ModeMismatch,
    #[error("non-finite value at subset {0}")]
    NonFinite(Subset),
    #[error("cannot parse scalar {0:?}")]
    ScalarSyntax(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("order is not a permutation of {0}: {1}")]
    InvalidOrder(Subset, String),
    #[error("chain is not strictly increasing from the empty set to its carrier: {0}")]
    InvalidChain(String),
    #[error("chain is not maximal; consecutive sets must differ by one point")]
    NotMaximal,
    #[error("{inner} is not a subset of {outer}")]
    NotSubset { inner: Subset, outer: Subset },
    #[error("{0} is not a member of the chain")]
    NotChainMember(Subset),
    #[error("{0} is not a union of chain atoms")]
    NotInChainAlgebra(Subset),
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("generator index {index} outside 1..={count}")]
    GeneratorIndex { index: usize, count: usize },
    #[error("family has {0} members; at most {max} supported", max = crate::embed::MAX_MEMBERS)]
    FamilySize(usize),
    #[error("invalid distortion: {0}")]
    InvalidDistortion(String),
    #[error("invalid probability weights: {0}")]
    InvalidWeights(String),
    #[error("point lists overlap at {0}")]
    Overlap(Subset),
    #[error("invalid instance: {0}")]
    Instance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
