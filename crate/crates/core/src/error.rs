use thiserror::Error;

use crate::clipping::ParamBox;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("projective map is singular or not finite")]
    InvalidMap,

    #[error("point lies on the neutral plane z = -k and has no affine image")]
    NeutralPlaneSingularity,

    #[error("point lies on the vanishing plane z = 1 + k and has no affine preimage")]
    VanishingPlaneSingularity,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("Bernstein index {index} out of range for degree {degree}")]
    IndexError { index: usize, degree: usize },

    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("rational denominator vanishes at t = {0}")]
    EvaluationSingularity(f64),

    #[error("cannot split at parameter {0}: split point must be interior")]
    DegenerateSplit(f64),

    #[error("empty parameter interval [{0}, {1}]")]
    EmptyInterval(f64, f64),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("weight {weight} of control point {index} must be below 1 + k = {limit}")]
    WeightOutOfRange {
        index: usize,
        weight: f64,
        limit: f64,
    },

    #[error("control point {index} maps to zero weight (lies on a singular plane)")]
    ControlOnSingularPlane { index: usize },

    #[error("control point {index} has zero depth and cannot be projected from the origin")]
    ControlThroughCenter { index: usize },

    #[error("curve is not a relief-form curve: {0}")]
    NotFormEight(String),

    #[error("all control points coincide")]
    DegenerateCurve,

    #[error("clipping did not resolve {} parameter region(s); tangency or overlap suspected", .0.len())]
    UnresolvedRegion(Vec<ParamBox>),

    #[error(
        "projected curve has non-positive weights; subdivide the input or choose a different span k"
    )]
    NonPositiveProjectedWeights,

    #[error("span k not supplied and the inputs do not share a detectable span")]
    MissingSpan,
}
