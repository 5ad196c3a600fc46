use thiserror::Error;

use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size {size} is outside the supported range 1..={max}")]
    GroundSetSize { size: usize, max: usize },
    #[error("matroid axiom violated: {0}")]
    AxiomViolation(String),
    #[error("element {0} is a loop; only loopless matroids are supported")]
    LoopPresent(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0} is not a flat")]
    NotAFlat(Subset),
    #[error("operation needs rank at least {needed}, matroid has rank {rank}")]
    RankTooSmall { needed: usize, rank: usize },
    #[error("characteristic polynomial is not divisible by (x - 1)")]
    NonzeroRemainder,
    #[error("not an order filter: {0}")]
    NotAnOrderFilter(String),
    #[error("fan property violated: {0}")]
    FanPropertyViolation(String),
    #[error("ray {0} is not a ray of the fan")]
    RayNotInFan(String),
    #[error("cone is not in the fan: {0}")]
    ConeNotInFan(String),
    #[error("function is not strictly submodular: {0}")]
    NotStrictlySubmodular(String),
    #[error("expected an element of degree {expected}, got degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("no degree map is attached to this ring")]
    DegreeUnavailable,
    #[error("identity failed: {0}")]
    IdentityViolation(String),
    #[error("decomposition failed: {0}")]
    DecompositionViolation(String),
    #[error("class is not ample: {0}")]
    NotAmple(String),
    #[error("computation routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("{what} is {value}, above the limit {limit}")]
    SizeCapExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("edge {0} is a loop; graphic matroids must be loopless")]
    LoopEdge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
