//! Curve-level constructions linking planar rational curves, their
//! nonrational space lifts and the space rational curves whose relief is
//! that lift.
//!
//! Starting from planar control points `V_i = (x_i, y_i)` with weights `w_i`:
//!
//! * [`planar_curve`] is the planar rational curve.
//! * [`lift_nonrational`] is the polynomial space curve with control points
//!   `(x_i w_i, y_i w_i, w_i)`; its central projection from the origin onto
//!   `z = 1` is the planar curve.
//! * [`build_q`] is the space rational curve with control points
//!   `k (x_i w_i, y_i w_i, w_i) / (1 + k - w_i)` and weights `1 + k - w_i`.
//!   Its relief under span `k` is exactly the nonrational lift.
//!
//! The relief of a whole curve is taken on the weighted homogeneous control
//! points without normalising them one by one; normalising each point would
//! change the weights and hence the curve.

use crate::bezier::{weight_spread, RationalCurve2D, RationalCurve3D};
use crate::error::{Error, Result};
use crate::projective::{HPoint3, Point3, ReliefMap};

/// Default relative tolerance on the spread of per-control-point span
/// estimates in [`detect_span`].
pub const DEFAULT_SPAN_TOL: f64 = 1e-9;

/// Planar control points with strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSeed {
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
}

impl PlanarSeed {
    pub fn new(points: Vec<[f64; 2]>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidCurve(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.len() < 2 {
            return Err(Error::InvalidCurve(
                "a seed needs at least two points".into(),
            ));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCurve("seed points must be finite".into()));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidCurve(format!(
                "seed weight {i} must be positive, got {}",
                weights[i]
            )));
        }
        Ok(PlanarSeed { points, weights })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn check_span(&self, k: f64) -> Result<()> {
        ReliefMap::new(k)?;
        let limit = 1.0 + k;
        match self.weights.iter().position(|&w| w >= limit) {
            Some(index) => Err(Error::WeightOutOfRange {
                index,
                weight: self.weights[index],
                limit,
            }),
            None => Ok(()),
        }
    }
}

/// A space curve recognised as the relief-form curve of a planar seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanDecomposition {
    pub k: f64,
    pub seed: PlanarSeed,
    /// Relative spread of the per-control-point span estimates.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn planar_curve(seed: &PlanarSeed) -> RationalCurve2D {
    RationalCurve2D::new(seed.points.clone(), seed.weights.clone())
        .expect("seed invariants imply a valid curve")
}

/// Polynomial space curve with control points `(x_i w_i, y_i w_i, w_i)`.
pub fn lift_nonrational(seed: &PlanarSeed) -> RationalCurve3D {
    let control = seed
        .points
        .iter()
        .zip(&seed.weights)
        .map(|(p, &w)| [p[0] * w, p[1] * w, w])
        .collect();
    RationalCurve3D::polynomial(control).expect("seed invariants imply a valid curve")
}

/// Control points `W_i = k (x_i w_i, y_i w_i, w_i) / (1 + k - w_i)`, the
/// preimages of the lifted control points under the relief with span `k`.
pub fn build_w(seed: &PlanarSeed, k: f64) -> Result<Vec<Point3>> {
    seed.check_span(k)?;
    Ok(seed
        .points
        .iter()
        .zip(&seed.weights)
        .map(|(p, &w)| {
            let s = k * w / (1.0 + k - w);
            Point3::new(s * p[0], s * p[1], s)
        })
        .collect())
}

/// The space rational curve with control points from [`build_w`] and
/// weights `1 + k - w_i`.
pub fn build_q(seed: &PlanarSeed, k: f64) -> Result<RationalCurve3D> {
    seed.check_span(k)?;
    let hom = seed
        .points
        .iter()
        .zip(&seed.weights)
        .map(|(p, &w)| ([k * p[0] * w, k * p[1] * w, k * w], 1.0 + k - w))
        .collect();
    RationalCurve3D::from_homogeneous(hom)
}

/// Maps every weighted homogeneous control point through the relief matrix
/// (or its inverse). The result traces the relief (or preimage) of the
/// input curve pointwise.
pub fn apply_relief_to_curve(
    curve: &RationalCurve3D,
    relief: &ReliefMap,
    direction: Direction,
) -> Result<RationalCurve3D> {
    let map = match direction {
        Direction::Forward => relief.matrix(),
        Direction::Inverse => relief.inverse_matrix(),
    };
    let mut hom = Vec::with_capacity(curve.degree() + 1);
    for (index, (p, w)) in curve.homogeneous().iter().enumerate() {
        let img = map.apply(&HPoint3 {
            x: p[0],
            y: p[1],
            z: p[2],
            w: *w,
        });
        let scale = img.x.abs().max(img.y.abs()).max(img.z.abs());
        if img.w.abs() <= 1e-14 * scale || img.w == 0.0 {
            return Err(Error::ControlOnSingularPlane { index });
        }
        hom.push(([img.x, img.y, img.z], img.w));
    }
    RationalCurve3D::from_homogeneous(hom)
}

/// Central projection from the origin onto the plane `z = 1`, returned as a
/// planar curve. Homogeneous control `(X, Y, Z, W)` becomes planar
/// homogeneous control `(X, Y; Z)`, i.e. point `(X/Z, Y/Z)` with weight `Z`.
pub fn central_project(curve: &RationalCurve3D) -> Result<RationalCurve2D> {
    let mut hom = Vec::with_capacity(curve.degree() + 1);
    for (index, (p, _)) in curve.homogeneous().iter().enumerate() {
        let scale = p[0].abs().max(p[1].abs());
        if p[2] == 0.0 || p[2].abs() <= 1e-14 * scale {
            return Err(Error::ControlThroughCenter { index });
        }
        hom.push(([p[0], p[1]], p[2]));
    }
    RationalCurve2D::from_homogeneous(hom)
}

/// Positive root of `k^2 + (1 - omega) k - c = 0` for `c > 0`.
fn positive_span_root(omega: f64, c: f64) -> f64 {
    let b = 1.0 - omega;
    let disc = (b * b + 4.0 * c).sqrt();
    if b >= 0.0 {
        2.0 * c / (b + disc)
    } else {
        0.5 * (disc - b)
    }
}

/// Recovers `(k, seed)` from a curve built by [`build_q`].
///
/// Each control point with weight `Ω_i` and weighted depth `c_i = Z_i Ω_i`
/// determines a span as the positive root of `k^2 + (1 - Ω_i) k - c_i = 0`.
/// The curve is in relief form when all these roots agree within relative
/// `tol`. Weights are taken verbatim: a global rescaling of the weights of a
/// relief-form curve generally breaks the form.
pub fn detect_span(curve: &RationalCurve3D, tol: f64) -> Result<SpanDecomposition> {
    if !curve.positive_weights() {
        return Err(Error::NotFormEight("weights must be positive".into()));
    }
    let mut roots = Vec::with_capacity(curve.degree() + 1);
    for (i, (p, omega)) in curve.homogeneous().iter().enumerate() {
        let c = p[2];
        if c.is_nan() || c <= 0.0 {
            return Err(Error::NotFormEight(format!(
                "control point {i} has non-positive weighted depth"
            )));
        }
        roots.push(positive_span_root(*omega, c));
    }
    let max = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let k = roots.iter().sum::<f64>() / roots.len() as f64;
    let residual = (max - min) / k;
    if residual.is_nan() || residual > tol {
        return Err(Error::NotFormEight(format!(
            "per-point span estimates disagree (relative spread {residual:.3e})"
        )));
    }
    let mut points = Vec::with_capacity(roots.len());
    let mut weights = Vec::with_capacity(roots.len());
    for (i, (p, omega)) in curve.homogeneous().iter().enumerate() {
        let w = 1.0 + k - omega;
        if !(w > 0.0 && w < 1.0 + k) {
            return Err(Error::NotFormEight(format!(
                "recovered weight {i} = {w} outside (0, 1 + k)"
            )));
        }
        points.push([p[0] / (k * w), p[1] / (k * w)]);
        weights.push(w);
    }
    Ok(SpanDecomposition {
        k,
        seed: PlanarSeed::new(points, weights)?,
        residual,
    })
}

/// Relative weight spread; zero for nonrational curves.
pub fn nonrational_spread(curve: &RationalCurve3D) -> f64 {
    weight_spread(&curve.weights())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::distance;

    fn example_seed() -> PlanarSeed {
        PlanarSeed::new(vec![[1.0, 1.0], [1.0, 0.0]], vec![1.0, 2.0]).unwrap()
    }

    #[test]
    fn seed_validation() {
        assert!(PlanarSeed::new(vec![[0.0, 0.0]], vec![1.0]).is_err());
        assert!(PlanarSeed::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0]).is_err());
        assert!(PlanarSeed::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0, 0.0]).is_err());
        assert!(PlanarSeed::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn planar_curve_examples() {
        let seg =
            planar_curve(&PlanarSeed::new(vec![[0.0, 0.0], [1.0, 1.0]], vec![1.0, 1.0]).unwrap());
        assert_eq!(seg.eval(0.25).unwrap(), [0.25, 0.25]);

        let p = planar_curve(&example_seed()).eval(0.5).unwrap();
        assert!(distance(&p, &[1.0, 1.0 / 3.0]) < 1e-15);

        let ctrl = vec![[0.0, 0.0], [1.0, 2.0], [3.0, -1.0]];
        let equal = planar_curve(&PlanarSeed::new(ctrl.clone(), vec![0.7; 3]).unwrap());
        let poly = RationalCurve2D::polynomial(ctrl).unwrap();
        for s in 0..=10 {
            let t = s as f64 / 10.0;
            assert!(distance(&equal.eval(t).unwrap(), &poly.eval(t).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn lift_examples() {
        let lift = lift_nonrational(&example_seed());
        assert_eq!(
            lift.control_points(),
            vec![[1.0, 1.0, 1.0], [2.0, 0.0, 2.0]]
        );
        assert_eq!(lift.weights(), vec![1.0, 1.0]);
        assert!(lift.is_nonrational());
        assert_eq!(lift.eval(0.0).unwrap(), [1.0, 1.0, 1.0]);
        for s in 0..=8 {
            let t = s as f64 / 8.0;
            let z = lift.eval(t).unwrap()[2];
            assert!((z - (1.0 * (1.0 - t) + 2.0 * t)).abs() < 1e-15);
        }
    }

    #[test]
    fn build_w_examples() {
        let w = build_w(&example_seed(), 2.0).unwrap();
        assert_eq!(
            w,
            vec![Point3::new(1.0, 1.0, 1.0), Point3::new(4.0, 0.0, 4.0)]
        );
        let r = ReliefMap::new(2.0).unwrap();
        assert_eq!(r.forward(w[1]).unwrap(), Point3::new(2.0, 0.0, 2.0));
        assert_eq!(r.forward(w[0]).unwrap(), Point3::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn build_w_rejects_heavy_weights() {
        let seed = PlanarSeed::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0, 3.0]).unwrap();
        assert_eq!(
            build_w(&seed, 2.0),
            Err(Error::WeightOutOfRange {
                index: 1,
                weight: 3.0,
                limit: 3.0
            })
        );
        assert!(build_q(&seed, 2.0).is_err());
        assert!(build_q(&seed, 2.5).is_ok());
    }

    #[test]
    fn build_q_example() {
        let q = build_q(&example_seed(), 2.0).unwrap();
        assert_eq!(q.control_points(), vec![[1.0, 1.0, 1.0], [4.0, 0.0, 4.0]]);
        assert_eq!(q.weights(), vec![2.0, 1.0]);
        assert_eq!(
            q.homogeneous(),
            &[([2.0, 2.0, 2.0], 2.0), ([4.0, 0.0, 4.0], 1.0)]
        );
        let flat = PlanarSeed::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]], vec![0.5; 3]).unwrap();
        assert!(build_q(&flat, 1.5).unwrap().is_nonrational());
    }

    #[test]
    fn relief_of_form_eight_is_nonrational() {
        let r = ReliefMap::new(2.0).unwrap();
        let q = build_q(&example_seed(), 2.0).unwrap();
        let rel = apply_relief_to_curve(&q, &r, Direction::Forward).unwrap();
        assert_eq!(
            rel.homogeneous(),
            &[([6.0, 6.0, 6.0], 6.0), ([12.0, 0.0, 12.0], 6.0)]
        );
        assert_eq!(rel.control_points(), vec![[1.0, 1.0, 1.0], [2.0, 0.0, 2.0]]);
        assert!(rel.is_nonrational());
    }

    #[test]
    fn relief_of_lift_has_shifted_weights() {
        let k = 2.0;
        let r = ReliefMap::new(k).unwrap();
        let seed = example_seed();
        let rel = apply_relief_to_curve(&lift_nonrational(&seed), &r, Direction::Forward).unwrap();
        for ((p, w), (v, &sw)) in rel
            .control_points()
            .iter()
            .zip(rel.weights())
            .zip(seed.points().iter().zip(seed.weights()))
        {
            assert_eq!(w, sw + k);
            let expect = [(1.0 + k) * v[0] * sw, (1.0 + k) * v[1] * sw, (1.0 + k) * sw]
                .map(|c| c / (sw + k));
            assert!(distance(p, &expect) < 1e-15);
        }
    }

    #[test]
    fn relief_fixes_curves_in_image_plane() {
        let r = ReliefMap::new(3.0).unwrap();
        let c = RationalCurve3D::new(
            vec![[0.0, 1.0, 1.0], [2.0, -1.0, 1.0], [3.0, 3.0, 1.0]],
            vec![1.0, 4.0, 0.5],
        )
        .unwrap();
        let rel = apply_relief_to_curve(&c, &r, Direction::Forward).unwrap();
        for (a, b) in rel.control_points().iter().zip(c.control_points()) {
            assert!(distance(a, &b) < 1e-15);
        }
        let ratio: Vec<f64> = rel
            .weights()
            .iter()
            .zip(c.weights())
            .map(|(a, b)| a / b)
            .collect();
        assert!(ratio.iter().all(|q| (q - ratio[0]).abs() < 1e-15));
    }

    #[test]
    fn relief_rejects_control_on_neutral_plane() {
        let r = ReliefMap::new(2.0).unwrap();
        let c = RationalCurve3D::polynomial(vec![[0.0, 0.0, 1.0], [1.0, 0.0, -2.0]]).unwrap();
        assert_eq!(
            apply_relief_to_curve(&c, &r, Direction::Forward),
            Err(Error::ControlOnSingularPlane { index: 1 })
        );
        let c = RationalCurve3D::polynomial(vec![[0.0, 0.0, 3.0], [1.0, 0.0, 1.0]]).unwrap();
        assert_eq!(
            apply_relief_to_curve(&c, &r, Direction::Inverse),
            Err(Error::ControlOnSingularPlane { index: 0 })
        );
    }

    #[test]
    fn central_project_examples() {
        let seed = example_seed();
        assert_eq!(
            central_project(&lift_nonrational(&seed)).unwrap(),
            planar_curve(&seed)
        );

        let seg = RationalCurve3D::polynomial(vec![[-1.0, 0.0, 2.0], [1.0, 0.0, 2.0]]).unwrap();
        let p = central_project(&seg).unwrap();
        assert_eq!(p.control_points(), vec![[-0.5, 0.0], [0.5, 0.0]]);
        assert_eq!(p.weights(), vec![2.0, 2.0]);

        let flat =
            RationalCurve3D::new(vec![[1.0, 2.0, 1.0], [3.0, 4.0, 1.0]], vec![0.5, 3.0]).unwrap();
        let p = central_project(&flat).unwrap();
        assert_eq!(p.control_points(), vec![[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(p.weights(), vec![0.5, 3.0]);

        let through = RationalCurve3D::polynomial(vec![[1.0, 0.0, 0.0], [1.0, 0.0, 1.0]]).unwrap();
        assert_eq!(
            central_project(&through),
            Err(Error::ControlThroughCenter { index: 0 })
        );
    }

    #[test]
    fn detect_span_examples() {
        // Control (4, 0, 4) with weight 1: k^2 - 4 = 0.
        assert_eq!(positive_span_root(1.0, 4.0), 2.0);
        let q = build_q(&example_seed(), 2.0).unwrap();
        let d = detect_span(&q, DEFAULT_SPAN_TOL).unwrap();
        assert!((d.k - 2.0).abs() < 1e-15);
        assert_eq!(d.seed, example_seed());
        assert!(d.residual < 1e-15);
    }

    #[test]
    fn detect_span_rejects_perturbed_depth() {
        let seed = PlanarSeed::new(
            vec![[0.0, 0.0], [1.0, 2.0], [2.0, -1.0], [3.0, 0.5]],
            vec![0.5, 1.2, 2.0, 0.9],
        )
        .unwrap();
        let q = build_q(&seed, 2.0).unwrap();
        let mut hom = q.homogeneous().to_vec();
        hom[0].0[2] *= 1.1;
        let bent = RationalCurve3D::from_homogeneous(hom).unwrap();
        assert!(matches!(
            detect_span(&bent, DEFAULT_SPAN_TOL),
            Err(Error::NotFormEight(_))
        ));
    }

    #[test]
    fn detect_span_rejects_bad_input() {
        let neg =
            RationalCurve3D::new(vec![[0.0, 0.0, 1.0], [1.0, 0.0, 1.0]], vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            detect_span(&neg, 1e-9),
            Err(Error::NotFormEight(_))
        ));
        let below = RationalCurve3D::polynomial(vec![[0.0, 0.0, -1.0], [1.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(
            detect_span(&below, 1e-9),
            Err(Error::NotFormEight(_))
        ));
    }
}
