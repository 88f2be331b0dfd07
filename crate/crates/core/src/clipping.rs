//! Planar curve/curve intersection by Bézier clipping.
//!
//! Each step bounds one curve by a *fat line* (a line plus a band of signed
//! distances containing all of its control points) and removes the parameter
//! ranges of the other curve that provably stay outside the band. For a
//! rational curve the signed distance to a line is
//! `Σ w_i d_i B_i(t) / Σ w_i B_i(t)`; with positive weights the denominator is
//! positive, so `d(t) >= d_min` exactly where the polynomial with Bernstein
//! coefficients `(d_i - d_min) w_i` is nonnegative (and likewise for
//! `d_max`). The convex hull of each such explicit Bézier curve bounds where it
//! can be nonnegative.
//!
//! When a round of clipping removes less than a fixed fraction of either
//! parameter interval, the curve with the longer interval is split in half
//! and both halves are processed separately.

use crate::bezier::{distance, joint_diagonal, Param, RationalCurve2D};
use crate::error::{Error, Result};

/// A line with unit normal and a band of signed distances around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatLine {
    pub normal: [f64; 2],
    pub offset: f64,
    pub d_min: f64,
    pub d_max: f64,
}

impl FatLine {
    /// Signed distance `normal · p - offset`.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        self.normal[0] * p[0] + self.normal[1] * p[1] - self.offset
    }

    fn widened(mut self, slack: f64) -> Self {
        self.d_min -= slack;
        self.d_max += slack;
        self
    }

    /// Band with the given unit normal covering all control points.
    fn covering(normal: [f64; 2], anchor: [f64; 2], points: &[[f64; 2]]) -> Self {
        let offset = normal[0] * anchor[0] + normal[1] * anchor[1];
        let mut line = FatLine {
            normal,
            offset,
            d_min: 0.0,
            d_max: 0.0,
        };
        for p in points {
            let d = line.distance(*p);
            line.d_min = line.d_min.min(d);
            line.d_max = line.d_max.max(d);
        }
        line
    }
}

/// Fat line through the first and last control points.
///
/// If the endpoints coincide the line runs from the first control point
/// towards the farthest one.
pub fn fat_line(curve: &RationalCurve2D) -> Result<FatLine> {
    if !curve.positive_weights() {
        return Err(Error::DomainError(
            "fat lines require positive weights".into(),
        ));
    }
    let pts = curve.control_points();
    let first = pts[0];
    let chord = |q: &[f64; 2]| [q[0] - first[0], q[1] - first[1]];
    let mut dir = chord(&pts[pts.len() - 1]);
    let mut len = dir[0].hypot(dir[1]);
    if len == 0.0 {
        let far = pts
            .iter()
            .max_by(|a, b| distance(&first, a).total_cmp(&distance(&first, b)))
            .expect("curve has control points");
        dir = chord(far);
        len = dir[0].hypot(dir[1]);
        if len == 0.0 {
            return Err(Error::DegenerateCurve);
        }
    }
    let normal = [-dir[1] / len, dir[0] / len];
    Ok(FatLine::covering(normal, first, &pts))
}

/// Fat lines used while clipping against `curve`: the chord-aligned band,
/// the band perpendicular to it, or two axis bands for a curve collapsed to
/// a point.
fn bounding_bands(curve: &RationalCurve2D) -> Vec<FatLine> {
    let pts = curve.control_points();
    match fat_line(curve) {
        Ok(line) => {
            let along = [line.normal[1], -line.normal[0]];
            vec![line, FatLine::covering(along, pts[0], &pts)]
        }
        Err(_) => vec![
            FatLine::covering([1.0, 0.0], pts[0], &pts),
            FatLine::covering([0.0, 1.0], pts[0], &pts),
        ],
    }
}

/// Nonparametric Bézier function with abscissae `i / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitBezier {
    pub coefficients: Vec<f64>,
}

impl ExplicitBezier {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn abscissa(&self, i: usize) -> f64 {
        let n = self.degree();
        if n == 0 {
            0.0
        } else {
            i as f64 / n as f64
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut work = self.coefficients.clone();
        let n = work.len();
        for r in 1..n {
            for i in 0..n - r {
                work[i] = (1.0 - t) * work[i] + t * work[i + 1];
            }
        }
        work[0]
    }
}

/// Coefficients `(d_i - d_min) w_i` and `(d_max - d_i) w_i` of the curve's
/// signed distance to `line`, with the rational denominator cleared.
pub fn distance_coefficients(
    curve: &RationalCurve2D,
    line: &FatLine,
) -> (ExplicitBezier, ExplicitBezier) {
    let (lower, upper) = curve
        .homogeneous()
        .iter()
        .map(|(p, w)| {
            let d = line.normal[0] * p[0] + line.normal[1] * p[1] - line.offset * w;
            (d - line.d_min * w, line.d_max * w - d)
        })
        .unzip();
    (
        ExplicitBezier {
            coefficients: lower,
        },
        ExplicitBezier {
            coefficients: upper,
        },
    )
}

/// The parameter range where the convex hull of the control polygon
/// `(i/n, e_i)` reaches `e >= 0`; `None` when the hull lies strictly below
/// zero.
pub fn clip_interval(e: &ExplicitBezier) -> Option<(f64, f64)> {
    let c = &e.coefficients;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &ei) in c.iter().enumerate() {
        if ei >= 0.0 {
            let x = e.abscissa(i);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    // The hull's crossings of e = 0 are among the crossings of the
    // segments joining a negative and a nonnegative control point.
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if (c[i] < 0.0) != (c[j] < 0.0) {
                let (xi, xj) = (e.abscissa(i), e.abscissa(j));
                let x = xi + (xj - xi) * c[i] / (c[i] - c[j]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
    }
    if lo > hi {
        None
    } else {
        Some((lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipOptions {
    /// Parameter width below which an interval counts as converged.
    pub tol_param: f64,
    /// Maximum distance between the two curve points of an accepted
    /// record. `None` means `1e-9` times the joint bounding-box diagonal.
    pub tol_point: Option<f64>,
    /// Maximum subdivision depth before a region is reported unresolved.
    pub max_depth: usize,
    /// Minimum fractional shrink per clipping round; below it the longer
    /// interval is split.
    pub min_reduction: f64,
}

impl Default for ClipOptions {
    fn default() -> Self {
        ClipOptions {
            tol_param: 1e-10,
            tol_point: None,
            max_depth: 60,
            min_reduction: 0.2,
        }
    }
}

/// A pair of parameter intervals, one per curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBox {
    pub t: (f64, f64),
    pub u: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionRecord2D {
    pub t: Param,
    pub u: Param,
    pub point: [f64; 2],
    /// Distance between the two curve points at `(t, u)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClipStats {
    pub clip_iterations: u64,
    pub subdivisions: u64,
    /// Converged boxes whose curve points were farther apart than the
    /// point tolerance.
    pub near_misses: u64,
    pub merged_duplicates: u64,
}

// Relative widening of every band, covering rounding in the control points
// of deeply extracted pieces.
const BAND_SLACK: f64 = 1e-13;
const MAX_ROUNDS: usize = 1000;

struct Clipper<'a> {
    p: &'a RationalCurve2D,
    q: &'a RationalCurve2D,
    opts: ClipOptions,
    tol_point: f64,
    slack: f64,
    stats: ClipStats,
    found: Vec<IntersectionRecord2D>,
    unresolved: Vec<ParamBox>,
}

fn width(r: (f64, f64)) -> f64 {
    r.1 - r.0
}

fn piece(curve: &RationalCurve2D, r: (f64, f64)) -> Result<RationalCurve2D> {
    if r.1 > r.0 {
        curve.extract(r.0, r.1)
    } else {
        let p = curve.eval(r.0)?;
        RationalCurve2D::polynomial(vec![p; curve.degree() + 1])
    }
}

impl Clipper<'_> {
    /// Clips `target` against the bands of `other`, returning the surviving
    /// normalised parameter range of `target`.
    fn clip(&self, target: &RationalCurve2D, other: &RationalCurve2D) -> Option<(f64, f64)> {
        let mut range = (0.0f64, 1.0f64);
        for band in bounding_bands(other) {
            let (lower, upper) = distance_coefficients(target, &band.widened(self.slack));
            let a = clip_interval(&lower)?;
            let b = clip_interval(&upper)?;
            range.0 = range.0.max(a.0).max(b.0);
            range.1 = range.1.min(a.1).min(b.1);
            if range.0 > range.1 {
                return None;
            }
        }
        Some(range)
    }

    fn accept(&mut self, tr: (f64, f64), ur: (f64, f64)) -> Result<()> {
        let t = 0.5 * (tr.0 + tr.1);
        let u = 0.5 * (ur.0 + ur.1);
        let a = self.p.eval(t)?;
        let b = self.q.eval(u)?;
        let residual = distance(&a, &b);
        if residual <= self.tol_point {
            self.found.push(IntersectionRecord2D {
                t: Param::new(t)?,
                u: Param::new(u)?,
                point: [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
                residual,
            });
        } else {
            self.stats.near_misses += 1;
        }
        Ok(())
    }

    fn solve(&mut self, mut tr: (f64, f64), mut ur: (f64, f64), depth: usize) -> Result<()> {
        if depth > self.opts.max_depth {
            self.unresolved.push(ParamBox { t: tr, u: ur });
            return Ok(());
        }
        let tol = self.opts.tol_param;
        for _ in 0..MAX_ROUNDS {
            if width(tr) < tol && width(ur) < tol {
                return self.accept(tr, ur);
            }
            self.stats.clip_iterations += 1;
            let (old_t, old_u) = (width(tr), width(ur));
            let mut p = piece(self.p, tr)?;
            let q = piece(self.q, ur)?;

            if old_t >= tol {
                let Some((lo, hi)) = self.clip(&p, &q) else {
                    return Ok(());
                };
                tr = (tr.0 + lo * old_t, tr.0 + hi * old_t);
                p = piece(self.p, tr)?;
            }
            if old_u >= tol {
                let Some((lo, hi)) = self.clip(&q, &p) else {
                    return Ok(());
                };
                ur = (ur.0 + lo * old_u, ur.0 + hi * old_u);
            }

            let keep = 1.0 - self.opts.min_reduction;
            let shrunk_t = old_t >= tol && width(tr) < keep * old_t;
            let shrunk_u = old_u >= tol && width(ur) < keep * old_u;
            if !(shrunk_t || shrunk_u) {
                self.stats.subdivisions += 1;
                if width(tr) >= width(ur) {
                    let mid = 0.5 * (tr.0 + tr.1);
                    self.solve((tr.0, mid), ur, depth + 1)?;
                    return self.solve((mid, tr.1), ur, depth + 1);
                } else {
                    let mid = 0.5 * (ur.0 + ur.1);
                    self.solve(tr, (ur.0, mid), depth + 1)?;
                    return self.solve(tr, (mid, ur.1), depth + 1);
                }
            }
        }
        self.unresolved.push(ParamBox { t: tr, u: ur });
        Ok(())
    }
}

/// Sorts by `(t, u)` and keeps one record per cluster of records closer
/// than `radius` in both parameters.
fn merge_duplicates(
    mut records: Vec<IntersectionRecord2D>,
    radius: f64,
) -> (Vec<IntersectionRecord2D>, u64) {
    records.sort_by(|a, b| {
        a.t.get()
            .total_cmp(&b.t.get())
            .then(a.u.get().total_cmp(&b.u.get()))
    });
    let mut kept: Vec<IntersectionRecord2D> = Vec::with_capacity(records.len());
    let mut merged = 0;
    for r in records {
        let dup = kept.iter_mut().find(|k| {
            (k.t.get() - r.t.get()).abs() < radius && (k.u.get() - r.u.get()).abs() < radius
        });
        match dup {
            Some(k) => {
                merged += 1;
                if r.residual < k.residual {
                    *k = r;
                }
            }
            None => kept.push(r),
        }
    }
    kept.sort_by(|a, b| {
        a.t.get()
            .total_cmp(&b.t.get())
            .then(a.u.get().total_cmp(&b.u.get()))
    });
    (kept, merged)
}

/// All transversal intersections of two planar rational curves with
/// positive weights, sorted by `t` then `u`.
pub fn intersect2d(
    p: &RationalCurve2D,
    q: &RationalCurve2D,
    opts: &ClipOptions,
) -> Result<Vec<IntersectionRecord2D>> {
    intersect2d_with_stats(p, q, opts).map(|(records, _)| records)
}

pub fn intersect2d_with_stats(
    p: &RationalCurve2D,
    q: &RationalCurve2D,
    opts: &ClipOptions,
) -> Result<(Vec<IntersectionRecord2D>, ClipStats)> {
    if !p.positive_weights() || !q.positive_weights() {
        return Err(Error::DomainError(
            "Bézier clipping requires positive weights".into(),
        ));
    }
    if opts.tol_param.is_nan() || opts.tol_param <= 0.0 || !(0.0..1.0).contains(&opts.min_reduction)
    {
        return Err(Error::DomainError("invalid clipping options".into()));
    }
    let diag = joint_diagonal(&[p, q]);
    let reach = p
        .control_points()
        .iter()
        .chain(q.control_points().iter())
        .flatten()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let mut clipper = Clipper {
        p,
        q,
        opts: *opts,
        tol_point: opts.tol_point.unwrap_or(1e-9 * diag),
        slack: BAND_SLACK * (diag + reach),
        stats: ClipStats::default(),
        found: Vec::new(),
        unresolved: Vec::new(),
    };
    clipper.solve((0.0, 1.0), (0.0, 1.0), 0)?;
    if !clipper.unresolved.is_empty() {
        return Err(Error::UnresolvedRegion(clipper.unresolved));
    }
    let (records, merged) = merge_duplicates(clipper.found, 10.0 * opts.tol_param);
    clipper.stats.merged_duplicates = merged;
    Ok((records, clipper.stats))
}
