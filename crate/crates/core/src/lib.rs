//! Relief perspective geometry for rational Bézier curves.
//!
//! The relief perspective is the perspective collineation with centre at the
//! origin and fixed image plane `z = 1`:
//!
//! ```text
//! (x, y, z) -> (1 + k) (x, y, z) / (z + k)
//! ```
//!
//! It squeezes the half-space behind the image plane into the slab
//! `1 < z < 1 + k`. A space rational Bézier curve whose control points and
//! weights are built from planar data in the right way (see
//! [`relief_curves::build_q`]) has a *nonrational* relief, and the central
//! projection of that relief onto `z = 1` is the planar rational curve it was
//! built from. [`pipeline::intersect_space`] uses this to reduce intersection of
//! two space curves to planar Bézier clipping ([`clipping::intersect2d`])
//! followed by a coincidence test in relief space.

pub mod bezier;
pub mod clipping;
pub mod error;
pub mod pipeline;
pub mod projective;
pub mod relief_curves;

pub use bezier::{bernstein, Param, RationalCurve, RationalCurve2D, RationalCurve3D};
pub use clipping::{
    clip_interval, distance_coefficients, fat_line, intersect2d, ClipOptions, ClipStats,
    ExplicitBezier, FatLine, IntersectionRecord2D, ParamBox,
};
pub use error::{Error, Result};
pub use pipeline::{
    intersect_space, oracle_intersect2d, oracle_intersect3d, IntersectionRecord3D, OracleRecord,
    PipelineOptions, RecordStatus,
};
pub use projective::{HPoint3, Point3, ProjectiveMap, ReliefMap};
pub use relief_curves::{
    apply_relief_to_curve, build_q, build_w, central_project, detect_span, lift_nonrational,
    planar_curve, Direction, PlanarSeed, SpanDecomposition,
};
