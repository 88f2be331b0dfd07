//! Rational Bézier curves in homogeneous form.
//!
//! A curve of degree `n` with control points `V_i` and weights `w_i` is the
//! quotient `Σ w_i V_i B_i^n(t) / Σ w_i B_i^n(t)`. Curves are stored as the
//! homogeneous pairs `(w_i V_i, w_i)` and every algorithm (evaluation,
//! subdivision, the projective maps in `relief_curves`) works on those pairs
//! directly, dividing only when an affine point is requested.

use crate::error::{Error, Result};

/// A curve parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Param(f64);

impl Param {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Param(t))
        } else {
            Err(Error::ParameterOutOfRange(t))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<Param> for f64 {
    fn from(p: Param) -> f64 {
        p.0
    }
}

fn binomial(n: usize, i: usize) -> f64 {
    let i = i.min(n - i);
    (0..i).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Bernstein polynomial `B_i^n(t) = C(n, i) t^i (1 - t)^(n - i)`.
pub fn bernstein(n: usize, i: usize, t: f64) -> Result<f64> {
    if i > n {
        return Err(Error::IndexError {
            index: i,
            degree: n,
        });
    }
    Ok(binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32))
}

/// Homogeneous control point: weighted coordinates and weight.
pub type Homogeneous<const D: usize> = ([f64; D], f64);

#[inline]
fn lerp<const D: usize>(a: &Homogeneous<D>, b: &Homogeneous<D>, t: f64) -> Homogeneous<D> {
    let s = 1.0 - t;
    let mut p = [0.0; D];
    for (k, v) in p.iter_mut().enumerate() {
        *v = s * a.0[k] + t * b.0[k];
    }
    (p, s * a.1 + t * b.1)
}

/// A rational Bézier curve in `D` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCurve<const D: usize> {
    hom: Vec<Homogeneous<D>>,
}

pub type RationalCurve2D = RationalCurve<2>;
pub type RationalCurve3D = RationalCurve<3>;

impl<const D: usize> RationalCurve<D> {
    /// Builds a curve from affine control points and weights.
    pub fn new(control: Vec<[f64; D]>, weights: Vec<f64>) -> Result<Self> {
        if control.len() != weights.len() {
            return Err(Error::InvalidCurve(format!(
                "{} control points but {} weights",
                control.len(),
                weights.len()
            )));
        }
        if control.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCurve("control points must be finite".into()));
        }
        let hom = control
            .into_iter()
            .zip(weights)
            .map(|(p, w)| (p.map(|c| c * w), w))
            .collect();
        Self::from_homogeneous(hom)
    }

    /// A curve with all weights equal to one.
    pub fn polynomial(control: Vec<[f64; D]>) -> Result<Self> {
        let n = control.len();
        Self::new(control, vec![1.0; n])
    }

    /// Builds a curve from homogeneous control points `(w_i V_i, w_i)`.
    pub fn from_homogeneous(hom: Vec<Homogeneous<D>>) -> Result<Self> {
        if hom.len() < 2 {
            return Err(Error::InvalidCurve(
                "a curve needs at least two control points".into(),
            ));
        }
        for (i, (p, w)) in hom.iter().enumerate() {
            if !w.is_finite() || p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidCurve(format!(
                    "control point {i} is not finite"
                )));
            }
            if *w == 0.0 {
                return Err(Error::InvalidCurve(format!("weight {i} is zero")));
            }
        }
        Ok(RationalCurve { hom })
    }

    pub fn degree(&self) -> usize {
        self.hom.len() - 1
    }

    pub fn homogeneous(&self) -> &[Homogeneous<D>] {
        &self.hom
    }

    pub fn control_point(&self, i: usize) -> [f64; D] {
        let (p, w) = &self.hom[i];
        p.map(|c| c / w)
    }

    pub fn control_points(&self) -> Vec<[f64; D]> {
        (0..self.hom.len()).map(|i| self.control_point(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.hom.iter().map(|h| h.1).collect()
    }

    pub fn positive_weights(&self) -> bool {
        self.hom.iter().all(|h| h.1 > 0.0)
    }

    /// All weights equal up to relative `1e-12`.
    pub fn is_nonrational(&self) -> bool {
        weight_spread(&self.weights()) <= 1e-12
    }

    fn de_casteljau(&self, t: f64) -> Homogeneous<D> {
        let mut work = self.hom.clone();
        let n = work.len();
        for r in 1..n {
            for i in 0..n - r {
                work[i] = lerp(&work[i], &work[i + 1], t);
            }
        }
        work[0]
    }

    /// Evaluates the curve by homogeneous de Casteljau and a single division.
    pub fn eval(&self, t: f64) -> Result<[f64; D]> {
        let t = Param::new(t)?.get();
        let (p, w) = self.de_casteljau(t);
        let scale = self.hom.iter().map(|h| h.1.abs()).fold(0.0, f64::max);
        if w.abs() <= f64::EPSILON * scale {
            return Err(Error::EvaluationSingularity(t));
        }
        Ok(p.map(|c| c / w))
    }

    /// Splits at interior `t`; the left piece covers `[0, t]`, the right
    /// piece `[t, 1]`, both reparameterised to `[0, 1]`.
    pub fn subdivide(&self, t: f64) -> Result<(Self, Self)> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::DegenerateSplit(t));
        }
        let (left, right) = self.split_unchecked(t);
        Ok((
            Self::from_homogeneous(left)?,
            Self::from_homogeneous(right)?,
        ))
    }

    fn split_unchecked(&self, t: f64) -> (Vec<Homogeneous<D>>, Vec<Homogeneous<D>>) {
        let n = self.hom.len();
        let mut work = self.hom.clone();
        let mut left = Vec::with_capacity(n);
        let mut right = vec![work[n - 1]; n];
        left.push(work[0]);
        for r in 1..n {
            for i in 0..n - r {
                work[i] = lerp(&work[i], &work[i + 1], t);
            }
            left.push(work[0]);
            right[n - 1 - r] = work[n - 1 - r];
        }
        (left, right)
    }

    /// The segment over `[t0, t1]`, reparameterised to `[0, 1]`.
    pub fn extract(&self, t0: f64, t1: f64) -> Result<Self> {
        Param::new(t0)?;
        Param::new(t1)?;
        if t0 >= t1 {
            return Err(Error::EmptyInterval(t0, t1));
        }
        let mut hom = self.hom.clone();
        if t1 < 1.0 {
            hom = Self { hom }.split_unchecked(t1).0;
        }
        if t0 > 0.0 {
            hom = Self { hom }.split_unchecked(t0 / t1).1;
        }
        Self::from_homogeneous(hom)
    }

    /// Multiplies every weight by `lambda > 0`; the point set is unchanged.
    pub fn weight_rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::DomainError(format!(
                "weight scale must be positive, got {lambda}"
            )));
        }
        Self::from_homogeneous(
            self.hom
                .iter()
                .map(|(p, w)| (p.map(|c| c * lambda), w * lambda))
                .collect(),
        )
    }

    /// Same point set traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut hom = self.hom.clone();
        hom.reverse();
        RationalCurve { hom }
    }

    /// Axis-aligned bounding box of the control points.
    pub fn control_bounds(&self) -> ([f64; D], [f64; D]) {
        let mut lo = [f64::INFINITY; D];
        let mut hi = [f64::NEG_INFINITY; D];
        for p in self.control_points() {
            for k in 0..D {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
}

/// `(max - min) / max|w|` over a weight sequence.
pub(crate) fn weight_spread(weights: &[f64]) -> f64 {
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = weights.iter().map(|w| w.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        (max - min) / scale
    }
}

/// Euclidean distance between two points.
pub fn distance<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Diagonal of the joint control-point bounding box of several curves.
pub fn joint_diagonal<const D: usize>(curves: &[&RationalCurve<D>]) -> f64 {
    let mut lo = [f64::INFINITY; D];
    let mut hi = [f64::NEG_INFINITY; D];
    for c in curves {
        let (l, h) = c.control_bounds();
        for k in 0..D {
            lo[k] = lo[k].min(l[k]);
            hi[k] = hi[k].max(h[k]);
        }
    }
    distance(&lo, &hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parabola() -> RationalCurve2D {
        RationalCurve::polynomial(vec![[0.0, 0.0], [1.0, 2.0], [2.0, 0.0]]).unwrap()
    }

    fn close<const D: usize>(a: [f64; D], b: [f64; D], tol: f64) -> bool {
        distance(&a, &b) <= tol
    }

    #[test]
    fn bernstein_values() {
        assert_eq!(bernstein(1, 0, 0.0).unwrap(), 1.0);
        assert_eq!(bernstein(2, 1, 0.5).unwrap(), 0.5);
        assert_eq!(
            bernstein(3, 4, 0.5),
            Err(Error::IndexError {
                index: 4,
                degree: 3
            })
        );
        for n in 0..12 {
            for t in [0.0, 0.13, 0.5, 0.77, 1.0] {
                let sum: f64 = (0..=n).map(|i| bernstein(n, i, t).unwrap()).sum();
                assert!((sum - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let c = parabola();
        assert_eq!(c.eval(0.0).unwrap(), [0.0, 0.0]);
        assert_eq!(c.eval(1.0).unwrap(), [2.0, 0.0]);
        assert_eq!(c.eval(0.5).unwrap(), [1.0, 1.0]);
        assert_eq!(c.eval(1.5), Err(Error::ParameterOutOfRange(1.5)));
    }

    #[test]
    fn eval_matches_bernstein_quotient() {
        let c = RationalCurve::new(
            vec![
                [0.0, 1.0, 2.0],
                [3.0, -1.0, 0.5],
                [1.0, 1.0, 1.0],
                [2.0, 4.0, -3.0],
            ],
            vec![0.5, 2.0, 1.5, 0.25],
        )
        .unwrap();
        for s in 0..=20 {
            let t = s as f64 / 20.0;
            let mut num = [0.0; 3];
            let mut den = 0.0;
            for (i, (p, w)) in c.control_points().iter().zip(c.weights()).enumerate() {
                let b = bernstein(3, i, t).unwrap();
                for k in 0..3 {
                    num[k] += p[k] * w * b;
                }
                den += w * b;
            }
            assert!(close(c.eval(t).unwrap(), num.map(|v| v / den), 1e-13));
        }
    }

    #[test]
    fn zero_denominator_detected() {
        let c = RationalCurve::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![1.0, -1.0]).unwrap();
        assert_eq!(c.eval(0.5), Err(Error::EvaluationSingularity(0.5)));
    }

    #[test]
    fn construction_errors() {
        assert!(RationalCurve::<2>::polynomial(vec![[0.0, 0.0]]).is_err());
        assert!(RationalCurve::new(vec![[0.0, 0.0], [1.0, 1.0]], vec![1.0]).is_err());
        assert!(RationalCurve::new(vec![[0.0, 0.0], [1.0, 1.0]], vec![1.0, 0.0]).is_err());
        assert!(RationalCurve::new(vec![[f64::NAN, 0.0], [1.0, 1.0]], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn subdivide_line() {
        let c = RationalCurve::polynomial(vec![[0.0, 0.0], [2.0, 4.0]]).unwrap();
        let (l, r) = c.subdivide(0.5).unwrap();
        assert_eq!(l.control_points(), vec![[0.0, 0.0], [1.0, 2.0]]);
        assert_eq!(r.control_points(), vec![[1.0, 2.0], [2.0, 4.0]]);
    }

    #[test]
    fn subdivide_parabola() {
        let (l, r) = parabola().subdivide(0.5).unwrap();
        assert_eq!(l.control_points(), vec![[0.0, 0.0], [0.5, 1.0], [1.0, 1.0]]);
        assert_eq!(l.weights(), vec![1.0, 1.0, 1.0]);
        assert_eq!(r.control_points(), vec![[1.0, 1.0], [1.5, 1.0], [2.0, 0.0]]);
    }

    #[test]
    fn subdivide_rejects_endpoints() {
        assert_eq!(parabola().subdivide(0.0), Err(Error::DegenerateSplit(0.0)));
        assert_eq!(parabola().subdivide(1.0), Err(Error::DegenerateSplit(1.0)));
    }

    #[test]
    fn extract_examples() {
        let c = RationalCurve::new(
            vec![[0.0, 0.0], [1.0, 3.0], [2.0, -1.0], [4.0, 1.0]],
            vec![1.0, 3.0, 0.5, 2.0],
        )
        .unwrap();
        let whole = c.extract(0.0, 1.0).unwrap();
        assert_eq!(whole, c);
        let seg = c.extract(0.2, 0.7).unwrap();
        assert!(close(seg.eval(0.5).unwrap(), c.eval(0.45).unwrap(), 1e-12));
        let twice = c.extract(0.0, 0.5).unwrap().extract(0.5, 1.0).unwrap();
        let direct = c.extract(0.25, 0.5).unwrap();
        for s in 0..=32 {
            let s = s as f64 / 32.0;
            assert!(close(
                twice.eval(s).unwrap(),
                direct.eval(s).unwrap(),
                1e-12
            ));
        }
        assert_eq!(c.extract(0.5, 0.5), Err(Error::EmptyInterval(0.5, 0.5)));
        assert_eq!(c.extract(0.7, 0.2), Err(Error::EmptyInterval(0.7, 0.2)));
    }

    #[test]
    fn weight_rescale_examples() {
        let c = parabola();
        assert_eq!(c.weight_rescale(1.0).unwrap(), c);
        let c2 = c.weight_rescale(2.0).unwrap();
        for s in 0..=10 {
            let t = s as f64 / 10.0;
            assert!(close(c2.eval(t).unwrap(), c.eval(t).unwrap(), 1e-15));
        }
        assert_eq!(c2.weight_rescale(0.5).unwrap().weights(), c.weights());
        assert!(c.weight_rescale(0.0).is_err());
        assert!(c.weight_rescale(-1.0).is_err());
    }

    #[test]
    fn predicates() {
        let c = RationalCurve::new(vec![[0.0, 0.0, 1.0], [1.0, 1.0, 1.0]], vec![2.0, 2.0]).unwrap();
        assert!(c.is_nonrational());
        assert!(c.positive_weights());
        let c = RationalCurve::new(vec![[0.0, 0.0], [1.0, 1.0]], vec![2.0, -2.0]).unwrap();
        assert!(!c.is_nonrational());
        assert!(!c.positive_weights());
    }

    fn curve_strategy(max_degree: usize) -> impl Strategy<Value = RationalCurve2D> {
        (1..=max_degree)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(prop::array::uniform2(-10.0f64..10.0), n + 1),
                    prop::collection::vec(0.1f64..10.0, n + 1),
                )
            })
            .prop_map(|(c, w)| RationalCurve::new(c, w).unwrap())
    }

    proptest! {
        #[test]
        fn subdivision_pieces_match_parent(c in curve_strategy(8), t in 0.01f64..0.99, s in 0.0f64..=1.0) {
            let (l, r) = c.subdivide(t).unwrap();
            let scale = 1.0 + joint_diagonal(&[&c]);
            prop_assert!(close(l.eval(s).unwrap(), c.eval(t * s).unwrap(), 1e-12 * scale));
            prop_assert!(close(r.eval(s).unwrap(), c.eval(t + s * (1.0 - t)).unwrap(), 1e-12 * scale));
        }

        #[test]
        fn extract_reparameterises(c in curve_strategy(6), a in 0.0f64..1.0, b in 0.0f64..1.0, s in 0.0f64..=1.0) {
            prop_assume!((a - b).abs() > 1e-3);
            let (t0, t1) = (a.min(b), a.max(b));
            let e = c.extract(t0, t1).unwrap();
            let scale = 1.0 + joint_diagonal(&[&c]);
            prop_assert!(close(e.eval(s).unwrap(), c.eval(t0 + s * (t1 - t0)).unwrap(), 1e-12 * scale));
        }

        #[test]
        fn reversal_reverses_parameter(c in curve_strategy(8), t in 0.0f64..=1.0) {
            let scale = 1.0 + joint_diagonal(&[&c]);
            prop_assert!(close(c.reversed().eval(t).unwrap(), c.eval(1.0 - t).unwrap(), 1e-12 * scale));
        }

        #[test]
        fn endpoints_interpolate(c in curve_strategy(10)) {
            let n = c.degree();
            let scale = 1.0 + joint_diagonal(&[&c]);
            prop_assert!(close(c.eval(0.0).unwrap(), c.control_point(0), 1e-14 * scale));
            prop_assert!(close(c.eval(1.0).unwrap(), c.control_point(n), 1e-14 * scale));
        }
    }
}
