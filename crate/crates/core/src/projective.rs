//! Homogeneous points, projective maps of extended 3-space and the relief
//! perspective.
//!
//! The relief perspective with span `k` has centre `O = (0, 0, 0)`, fixes the
//! image plane `z = 1` pointwise, sends the neutral plane `z = -k` to infinity
//! and the plane at infinity to the vanishing plane `z = 1 + k`. In matrix form
//! it acts on `(X, Y, Z, W)` by
//!
//! ```text
//! | 1+k  0    0    0 |
//! | 0    1+k  0    0 |
//! | 0    0    1+k  0 |
//! | 0    0    1    k |
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};

/// Relative tolerance for comparing homogeneous points up to scale.
pub const HPOINT_REL_TOL: f64 = 1e-9;

/// Scaled absolute tolerance used to detect points on the neutral or
/// vanishing plane.
pub const SINGULAR_PLANE_TOL: f64 = 1e-14;

const DET_REL_TOL: f64 = 1e-12;

/// An affine point of Euclidean 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point3) -> Point3 {
        Point3::new(
            0.5 * (self.x + other.x),
            0.5 * (self.y + other.y),
            0.5 * (self.z + other.z),
        )
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A point of extended 3-space in homogeneous coordinates `(X, Y, Z, W)`.
///
/// `W = 0` marks an ideal point. Values are never rescaled implicitly; only
/// [`HPoint3::to_affine`] divides by `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl HPoint3 {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Result<Self> {
        let h = HPoint3 { x, y, z, w };
        if !h.to_array().iter().all(|c| c.is_finite()) {
            return Err(Error::DomainError(
                "homogeneous coordinates must be finite".into(),
            ));
        }
        if h.to_array().iter().all(|&c| c == 0.0) {
            return Err(Error::DomainError(
                "homogeneous coordinates must not all vanish".into(),
            ));
        }
        Ok(h)
    }

    pub fn from_affine(p: Point3) -> Self {
        HPoint3 {
            x: p.x,
            y: p.y,
            z: p.z,
            w: 1.0,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn is_ideal(&self) -> bool {
        self.w == 0.0
    }

    /// Affine reading `(X/W, Y/W, Z/W)`; `None` for ideal points.
    pub fn to_affine(&self) -> Option<Point3> {
        if self.w == 0.0 {
            None
        } else {
            Some(Point3::new(
                self.x / self.w,
                self.y / self.w,
                self.z / self.w,
            ))
        }
    }

    /// Equality up to a nonzero scale factor.
    ///
    /// Both points are normalised by the coordinate that is largest in
    /// magnitude in `self`, then compared componentwise with relative
    /// tolerance [`HPOINT_REL_TOL`].
    pub fn approx_eq(&self, other: &HPoint3) -> bool {
        let a = self.to_array();
        let b = other.to_array();
        let m = (0..4)
            .max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
            .unwrap_or(0);
        if b[m] == 0.0 || a[m] == 0.0 {
            return false;
        }
        a.iter()
            .zip(b.iter())
            .all(|(ai, bi)| (ai / a[m] - bi / b[m]).abs() <= HPOINT_REL_TOL)
    }
}

/// An invertible linear map of homogeneous 4-space, i.e. a collineation of
/// extended 3-space.
///
/// On points with nonzero input and output `W` it acts as the fractional
/// linear map
/// `x' = (a11 x + a12 y + a13 z + a14) / (a41 x + a42 y + a43 z + a44)` and
/// likewise for `y'`, `z'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveMap {
    matrix: Matrix4<f64>,
}

impl ProjectiveMap {
    /// Builds a map from row-major coefficients `a[i][j]`.
    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_matrix(Matrix4::from_row_slice(&flat))
    }

    fn from_matrix(matrix: Matrix4<f64>) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMap);
        }
        let scale = matrix.norm();
        if scale == 0.0 || matrix.determinant().abs() <= DET_REL_TOL * scale.powi(4) {
            return Err(Error::InvalidMap);
        }
        Ok(ProjectiveMap { matrix })
    }

    pub fn identity() -> Self {
        ProjectiveMap {
            matrix: Matrix4::identity(),
        }
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.matrix[(i, j)];
            }
        }
        rows
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, h: &HPoint3) -> HPoint3 {
        let v = self.matrix * Vector4::new(h.x, h.y, h.z, h.w);
        HPoint3 {
            x: v[0],
            y: v[1],
            z: v[2],
            w: v[3],
        }
    }

    /// Affine action; fails when the image is an ideal point.
    pub fn apply_affine(&self, p: Point3) -> Result<Point3> {
        self.apply(&HPoint3::from_affine(p))
            .to_affine()
            .ok_or(Error::NeutralPlaneSingularity)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjectiveMap) -> Result<ProjectiveMap> {
        Self::from_matrix(self.matrix * other.matrix)
    }

    pub fn invert(&self) -> Result<ProjectiveMap> {
        let inv = self.matrix.try_inverse().ok_or(Error::InvalidMap)?;
        Self::from_matrix(inv)
    }

    /// True when both maps agree up to a common nonzero factor.
    pub fn approx_eq_up_to_scale(&self, other: &ProjectiveMap, rel_tol: f64) -> bool {
        let (i, _) = self
            .matrix
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("4x4 matrix is nonempty");
        let s = self.matrix.as_slice()[i];
        let o = other.matrix.as_slice()[i];
        if o == 0.0 {
            return false;
        }
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .all(|(a, b)| (a / s - b / o).abs() <= rel_tol)
    }
}

/// The relief perspective with span `k`.
///
/// Centre at the origin, image plane `z = 1`. The span is the distance from
/// the centre to the neutral plane and from the image plane to the vanishing
/// plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliefMap {
    k: f64,
}

impl ReliefMap {
    /// Any finite `k > 0` is accepted, `k = 1` included.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::DomainError(format!(
                "span k must be finite and positive, got {k}"
            )));
        }
        Ok(ReliefMap { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn center(&self) -> Point3 {
        Point3::ORIGIN
    }

    /// `z` offset of the pointwise fixed image plane.
    pub fn image_plane_z(&self) -> f64 {
        1.0
    }

    /// `z` offset of the vanishing plane, the image of the plane at infinity.
    pub fn vanishing_plane_z(&self) -> f64 {
        1.0 + self.k
    }

    /// `z` offset of the neutral plane, the preimage of the plane at infinity.
    pub fn neutral_plane_z(&self) -> f64 {
        -self.k
    }

    /// The point from which the orthographic view of a relief equals the
    /// central view of the original object.
    pub fn auxiliary_center(&self) -> Point3 {
        Point3::new(0.0, 0.0, -self.k)
    }

    pub fn matrix(&self) -> ProjectiveMap {
        let a = 1.0 + self.k;
        ProjectiveMap {
            matrix: Matrix4::new(
                a, 0.0, 0.0, 0.0, //
                0.0, a, 0.0, 0.0, //
                0.0, 0.0, a, 0.0, //
                0.0, 0.0, 1.0, self.k,
            ),
        }
    }

    /// Closed-form inverse, scaled by `k (1 + k)` to keep it polynomial in `k`.
    pub fn inverse_matrix(&self) -> ProjectiveMap {
        let k = self.k;
        ProjectiveMap {
            matrix: Matrix4::new(
                k,
                0.0,
                0.0,
                0.0, //
                0.0,
                k,
                0.0,
                0.0, //
                0.0,
                0.0,
                k,
                0.0, //
                0.0,
                0.0,
                -1.0,
                1.0 + k,
            ),
        }
    }

    fn singular_tol(&self, z: f64) -> f64 {
        SINGULAR_PLANE_TOL * 1f64.max(z.abs()).max(self.k)
    }

    pub fn forward(&self, p: Point3) -> Result<Point3> {
        let den = p.z + self.k;
        if den.abs() < self.singular_tol(p.z) {
            return Err(Error::NeutralPlaneSingularity);
        }
        let s = (1.0 + self.k) / den;
        Ok(Point3::new(s * p.x, s * p.y, s * p.z))
    }

    pub fn inverse(&self, p: Point3) -> Result<Point3> {
        let den = 1.0 + self.k - p.z;
        if den.abs() < self.singular_tol(p.z) {
            return Err(Error::VanishingPlaneSingularity);
        }
        let s = self.k / den;
        Ok(Point3::new(s * p.x, s * p.y, s * p.z))
    }

    /// Image of the plane `z = c` (parallel to the image plane), returned as
    /// its `z` offset `(1 + k) c / (c + k)`.
    pub fn plane_relief(&self, c: f64) -> Result<f64> {
        if c == 0.0 {
            return Err(Error::DomainError(
                "plane through the centre (c = 0) is excluded".into(),
            ));
        }
        let den = c + self.k;
        if den.abs() < self.singular_tol(c) {
            return Err(Error::NeutralPlaneSingularity);
        }
        Ok((1.0 + self.k) * c / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x: f64, y: f64, z: f64, w: f64) -> HPoint3 {
        HPoint3::new(x, y, z, w).unwrap()
    }

    #[test]
    fn identity_map_is_noop() {
        let p = h(1.5, -2.0, 3.25, 0.5);
        assert_eq!(ProjectiveMap::identity().apply(&p), p);
    }

    #[test]
    fn relief_matrix_on_homogeneous_point() {
        let m = ReliefMap::new(2.0).unwrap().matrix();
        assert_eq!(m.apply(&h(2.0, 2.0, 2.0, 2.0)), h(6.0, 6.0, 6.0, 6.0));
    }

    #[test]
    fn neutral_plane_goes_to_infinity() {
        for k in [0.5, 1.0, 2.0, 7.0] {
            let m = ReliefMap::new(k).unwrap().matrix();
            let img = m.apply(&h(0.0, 0.0, -k, 1.0));
            assert_eq!(img, h(0.0, 0.0, -k * (1.0 + k), 0.0));
            assert!(img.is_ideal());
        }
    }

    #[test]
    fn invert_and_compose() {
        let id = ProjectiveMap::identity();
        assert_eq!(id.invert().unwrap(), id);

        let m = ReliefMap::new(2.0).unwrap().matrix();
        let back = m.invert().unwrap().apply(&h(6.0, 6.0, 6.0, 6.0));
        assert!(back.approx_eq(&h(2.0, 2.0, 2.0, 2.0)));

        assert_eq!(m.compose(&id).unwrap(), m);
        let round = m.invert().unwrap().compose(&m).unwrap();
        assert!(round.approx_eq_up_to_scale(&id, 1e-12));
    }

    #[test]
    fn closed_form_inverse_matches_numeric_inverse() {
        for k in [0.25, 1.0, 3.0] {
            let r = ReliefMap::new(k).unwrap();
            let numeric = r.matrix().invert().unwrap();
            assert!(numeric.approx_eq_up_to_scale(&r.inverse_matrix(), 1e-12));
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut rows = [[0.0; 4]; 4];
        rows[0] = [1.0, 2.0, 3.0, 4.0];
        rows[1] = [2.0, 4.0, 6.0, 8.0];
        rows[2][2] = 1.0;
        rows[3][3] = 1.0;
        assert_eq!(ProjectiveMap::from_rows(rows), Err(Error::InvalidMap));
    }

    #[test]
    fn relief_determinant() {
        for k in [0.5, 2.0] {
            let det = ReliefMap::new(k).unwrap().matrix().determinant();
            assert!((det - k * (1.0 + k).powi(3)).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_examples() {
        let r = ReliefMap::new(2.0).unwrap();
        assert_eq!(
            r.forward(Point3::new(0.3, -4.0, 1.0)).unwrap(),
            Point3::new(0.3, -4.0, 1.0)
        );
        assert_eq!(r.forward(Point3::ORIGIN).unwrap(), Point3::ORIGIN);
        assert_eq!(
            r.forward(Point3::new(0.0, 0.0, 2.0)).unwrap(),
            Point3::new(0.0, 0.0, 1.5)
        );
        assert_eq!(
            r.forward(Point3::new(1.0, 1.0, -2.0)),
            Err(Error::NeutralPlaneSingularity)
        );
    }

    #[test]
    fn inverse_examples() {
        let r = ReliefMap::new(2.0).unwrap();
        assert_eq!(
            r.inverse(Point3::new(0.0, 0.0, 1.5)).unwrap(),
            Point3::new(0.0, 0.0, 2.0)
        );
        assert_eq!(
            r.inverse(Point3::new(7.0, 8.0, 1.0)).unwrap(),
            Point3::new(7.0, 8.0, 1.0)
        );
        assert_eq!(
            r.inverse(Point3::new(1.0, 1.0, 3.0)),
            Err(Error::VanishingPlaneSingularity)
        );
    }

    #[test]
    fn plane_relief_examples() {
        let r = ReliefMap::new(2.0).unwrap();
        assert_eq!(r.plane_relief(1.0).unwrap(), 1.0);
        assert_eq!(r.plane_relief(2.0).unwrap(), 1.5);
        assert!((r.plane_relief(1e6).unwrap() - 3.0).abs() < 1e-5);
        assert_eq!(r.plane_relief(-2.0), Err(Error::NeutralPlaneSingularity));
        assert!(matches!(r.plane_relief(0.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn span_validation() {
        assert!(ReliefMap::new(1.0).is_ok());
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(ReliefMap::new(bad).is_err());
        }
    }

    #[test]
    fn derived_planes() {
        let r = ReliefMap::new(2.5).unwrap();
        assert_eq!(
            r.center()
                .distance(Point3::new(0.0, 0.0, r.neutral_plane_z())),
            2.5
        );
        assert_eq!(r.vanishing_plane_z() - r.image_plane_z(), 2.5);
        assert_eq!(r.auxiliary_center(), Point3::new(0.0, 0.0, -2.5));
    }

    #[test]
    fn hpoint_scale_equality() {
        let a = h(1.0, 2.0, -3.0, 0.0);
        assert!(a.approx_eq(&h(-2.0, -4.0, 6.0, 0.0)));
        assert!(!a.approx_eq(&h(1.0, 2.0, -3.0, 1e-6)));
        assert!(HPoint3::new(0.0, 0.0, 0.0, 0.0).is_err());
    }
}
