use thiserror::Error;

use crate::angle::AngularValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("operation is undefined on the identity element")]
    IdentityInput,
    #[error("malformed elliptic spec: {0}")]
    Spec(String),
    #[error("oracle mode error: {0}")]
    Mode(String),
    #[error("resource limit exceeded: {what} (budget {budget})")]
    ResourceLimit { what: String, budget: usize },
    #[error("point lies outside the constructed ball: {0}")]
    PointOutsideBall(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("contact case does not match the elliptic spec: {0}")]
    CaseMismatch(String),
    #[error("ball too small: radius {required} required")]
    BallTooSmall { required: AngularValue },
    #[error("angle too small: {what} is {found}, need at least {needed}")]
    AngleTooSmall {
        what: String,
        found: AngularValue,
        needed: AngularValue,
    },
    #[error("cannot establish disjointness of the fixed sets: {0}")]
    DisjointnessUnknown(String),
    #[error("no exponent found in window 1..={window}")]
    Unresolved { window: u32 },
    #[error("certificate rejected: {0}")]
    Rejected(String),
}
