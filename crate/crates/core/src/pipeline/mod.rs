//! Intersection of space rational Bézier curves through the relief
//! perspective.
//!
//! Both curves are mapped by the relief `φ` and then centrally projected
//! (`ψ`) from the origin onto `z = 1`. The planar images are intersected by
//! Bézier clipping. Since the projection forgets depth, each planar crossing
//! is checked in relief space: the crossing is a true intersection only if
//! the two relief points over it coincide. Accepted points are pulled back
//! to the original space by `φ⁻¹`.

mod oracle;

pub use oracle::{oracle_intersect, oracle_intersect2d, oracle_intersect3d, OracleRecord};

use crate::bezier::{joint_diagonal, Param, RationalCurve3D};
use crate::clipping::{intersect2d_with_stats, ClipOptions, ClipStats};
use crate::error::{Error, Result};
use crate::projective::{Point3, ReliefMap};
use crate::relief_curves::{
    apply_relief_to_curve, central_project, detect_span, Direction, DEFAULT_SPAN_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    /// Span of the relief. When `None` it is taken from [`detect_span`] if
    /// both inputs decompose with the same span.
    pub k: Option<f64>,
    pub tol_param: f64,
    /// Planar point tolerance; `None` means `1e-9` times the planar
    /// bounding-box diagonal.
    pub tol_point2d: Option<f64>,
    /// Relief-space coincidence tolerance; `None` means `1e-8` times the
    /// relief-space bounding-box diagonal.
    pub tol_point3d: Option<f64>,
    pub max_depth: usize,
    /// Require both inputs to be relief-form curves.
    pub strict_form8: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            k: None,
            tol_param: 1e-10,
            tol_point2d: None,
            tol_point3d: None,
            max_depth: 60,
            strict_form8: false,
        }
    }
}

impl PipelineOptions {
    pub fn with_k(k: f64) -> Self {
        PipelineOptions {
            k: Some(k),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecordStatus {
    Accepted,
    /// The planar images cross but the relief points over the crossing
    /// differ: an artefact of the projection.
    ProjectionOnlyRejected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionRecord3D {
    pub t: Param,
    pub u: Param,
    /// Crossing of the projected curves in the plane `z = 1`.
    pub r_s: [f64; 2],
    /// Midpoint of the two relief points, for accepted records.
    pub r_r: Option<Point3>,
    /// Intersection point in the original space, for accepted records.
    pub r: Option<Point3>,
    /// Distance between the two relief points over `r_s`.
    pub residual3d: f64,
    /// Distance between `P(t)` and `Q(u)` on the input curves.
    pub residual_original: f64,
    pub status: RecordStatus,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub clip: ClipStats,
    pub accepted: u64,
    pub rejected: u64,
}

fn resolve_span(p: &RationalCurve3D, q: &RationalCurve3D, opts: &PipelineOptions) -> Result<f64> {
    if opts.strict_form8 {
        detect_span(p, DEFAULT_SPAN_TOL)?;
        detect_span(q, DEFAULT_SPAN_TOL)?;
    }
    if let Some(k) = opts.k {
        return Ok(k);
    }
    match (
        detect_span(p, DEFAULT_SPAN_TOL),
        detect_span(q, DEFAULT_SPAN_TOL),
    ) {
        (Ok(a), Ok(b)) if (a.k - b.k).abs() <= DEFAULT_SPAN_TOL * a.k.max(b.k) => {
            Ok(0.5 * (a.k + b.k))
        }
        _ => Err(Error::MissingSpan),
    }
}

fn relief_of(curve: &RationalCurve3D, relief: &ReliefMap) -> Result<RationalCurve3D> {
    apply_relief_to_curve(curve, relief, Direction::Forward).map_err(|e| match e {
        Error::ControlOnSingularPlane { .. } => Error::NeutralPlaneSingularity,
        other => other,
    })
}

/// Intersects two space rational curves. Records are sorted by `t` then
/// `u`.
pub fn intersect_space(
    p: &RationalCurve3D,
    q: &RationalCurve3D,
    opts: &PipelineOptions,
) -> Result<Vec<IntersectionRecord3D>> {
    intersect_space_with_stats(p, q, opts).map(|(records, _)| records)
}

pub fn intersect_space_with_stats(
    p: &RationalCurve3D,
    q: &RationalCurve3D,
    opts: &PipelineOptions,
) -> Result<(Vec<IntersectionRecord3D>, PipelineStats)> {
    let relief = ReliefMap::new(resolve_span(p, q, opts)?)?;
    let p_r = relief_of(p, &relief)?;
    let q_r = relief_of(q, &relief)?;
    let project = |c: &RationalCurve3D| match central_project(c) {
        Ok(s) if s.positive_weights() => Ok(s),
        _ => Err(Error::NonPositiveProjectedWeights),
    };
    let p_s = project(&p_r)?;
    let q_s = project(&q_r)?;

    let clip_opts = ClipOptions {
        tol_param: opts.tol_param,
        tol_point: opts.tol_point2d,
        max_depth: opts.max_depth,
        ..ClipOptions::default()
    };
    let (planar, clip) = intersect2d_with_stats(&p_s, &q_s, &clip_opts)?;
    let tol3d = opts
        .tol_point3d
        .unwrap_or_else(|| 1e-8 * joint_diagonal(&[&p_r, &q_r]));

    let mut stats = PipelineStats {
        clip,
        ..PipelineStats::default()
    };
    let mut records = Vec::with_capacity(planar.len());
    for rec in planar {
        let (t, u) = (rec.t.get(), rec.u.get());
        let a = Point3::from(p_r.eval(t)?);
        let b = Point3::from(q_r.eval(u)?);
        let residual3d = a.distance(b);
        let residual_original = Point3::from(p.eval(t)?).distance(Point3::from(q.eval(u)?));
        let (status, r_r, r) = if residual3d <= tol3d {
            stats.accepted += 1;
            let mid = a.midpoint(b);
            (
                RecordStatus::Accepted,
                Some(mid),
                Some(relief.inverse(mid)?),
            )
        } else {
            stats.rejected += 1;
            (RecordStatus::ProjectionOnlyRejected, None, None)
        };
        records.push(IntersectionRecord3D {
            t: rec.t,
            u: rec.u,
            r_s: rec.point,
            r_r,
            r,
            residual3d,
            residual_original,
            status,
        });
    }
    Ok((records, stats))
}
