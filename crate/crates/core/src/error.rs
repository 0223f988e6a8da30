use thiserror::Error;

use crate::ring::Elem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid ring parameter: {0}")]
    InvalidParameter(String),
    #[error("ring order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("{law} fails on ({}, {}, {})", witness[0], witness[1], witness[2])]
    AxiomViolation {
        law: &'static str,
        witness: [Elem; 3],
    },
    #[error("zero equals one")]
    TrivialRing,
    #[error("quotient by the whole ring is the zero ring")]
    TrivialQuotient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} outside supported range 1..=4")]
    UnsupportedDimension(usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("element {0} is not a unit")]
    NotUnit(Elem),
    #[error("index out of range or repeated: ({0}, {1})")]
    BadIndex(usize, usize),
    #[error("transvections t_{i}{k} and t_{l}{j} are opposite")]
    OppositePair { i: usize, k: usize, l: usize, j: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{what}: {size} exceeds the enumeration cap {cap}")]
    CapExceeded {
        what: String,
        size: u128,
        cap: usize,
    },
    #[error("subgroup `{0}` is incomplete (cap hit)")]
    Incomplete(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("{0} is not in the Jacobson radical")]
    NotRadical(String),
    #[error("zero pattern violated at ({row}, {col}) after the radical correction")]
    ZeroPattern { row: usize, col: usize },
    #[error("no reducing vector found: {0}")]
    NoReduction(String),
    #[error("element {0} is not central")]
    NotCentral(Elem),
    #[error("witness row is not admissible: {0}")]
    BadWitness(String),
    #[error("element {0} is not von Neumann regular")]
    NotRegular(Elem),
    #[error("({0}, {1}) violates the nearly-local relation")]
    NotNearlyLocal(Elem, Elem),
    #[error("vector is not unimodular")]
    NotUnimodular,
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
