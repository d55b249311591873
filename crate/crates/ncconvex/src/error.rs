//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not self-adjoint (deviation {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("matrix dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("matrix is not an isometry (deviation {0:.3e})")]
    NotIsometry(f64),
    #[error("family is not a partition of unity (deviation {0:.3e})")]
    PartitionOfUnityViolated(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("affine constraint system is inconsistent (residual {0:.3e})")]
    IllPosed(f64),
    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("set is already complex")]
    AlreadyComplex,
    #[error("set is already real")]
    AlreadyReal,
    #[error("body is unbounded")]
    UnboundedBody,
    #[error("body is empty")]
    EmptyBody,
    #[error("level {0} of the set is empty or cannot be sampled")]
    EmptyLevel(usize),
    #[error("element is not in the span of the system basis (residual {0:.3e})")]
    BasisMismatch(f64),
    #[error("pair is not in the complexified state space")]
    NotInComplexifiedStateSpace,
    #[error("map is not unital completely positive")]
    NotUcp,
    #[error("functional does not annihilate i*1 (norm {0:.3e})")]
    IAnnihilationFails(f64),
    #[error("image of the unit is singular or ill-conditioned")]
    SingularUnitImage,
    #[error("point is not a member of the set")]
    NotMember,
    #[error("representation not supported here: {0}")]
    RepresentationUnsupported(String),
    #[error("membership could not be decided")]
    MembershipUndecided,
    #[error("zero is not a member of the set")]
    ZeroNotInK,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
