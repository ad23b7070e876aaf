use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different symbol bases")]
    BasisMismatch,

    #[error("invalid symbol basis: {0}")]
    InvalidBasis(String),

    /// The enclosure of `lhs - rhs` contains zero although the difference is not exactly zero.
    #[error("cannot certify the order of {lhs} and {rhs}; tighter enclosures are needed")]
    RefineNeeded { lhs: String, rhs: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the generated subgroups differ")]
    GroupMismatch,

    #[error("element is not a member of the module")]
    NotMember,

    #[error("element is zero")]
    ZeroElement,

    #[error("element is not primitive in the module")]
    NotPrimitive,

    #[error("module is not contained in the ambient module")]
    NotSubmodule,

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    #[error("chart capacity {capacity} is below the torus norm {norm}")]
    CapacityTooSmall { norm: String, capacity: String },

    #[error("a chart capacity is required")]
    MissingCapacity,

    #[error("move {step} produces a non-positive component")]
    NonPositiveResult { step: String },

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("constructed path failed the lowness check and the bounded search found none")]
    InternalLownessFailure,

    #[error("iteration limit {limit} exceeded")]
    IterationLimit { limit: usize },

    #[error("operation cancelled")]
    Cancelled,

    #[error("the tori are not equivalent")]
    NotEquivalent,

    #[error("the manifold is special but no S0 was selected")]
    MissingS0,

    #[error("state space cap {cap} exceeded")]
    StateSpaceCap { cap: usize },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
