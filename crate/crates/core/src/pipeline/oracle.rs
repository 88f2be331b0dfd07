//! Brute-force intersection oracle used to cross-check clipping.
//!
//! Samples `|P(t) - Q(u)|` on a square lattice, keeps lattice local minima
//! that are close relative to the local sample spacing, and refines each
//! with coordinate-wise golden-section sweeps followed by Gauss-Newton
//! polishing on `P(t) - Q(u) = 0`. It only evaluates the curves and shares
//! no code with the clipping path.

use crate::bezier::{distance, joint_diagonal, RationalCurve, RationalCurve2D, RationalCurve3D};

const MIN_GRID: usize = 64;
const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_SWEEPS: usize = 24;
const NEWTON_STEPS: usize = 60;
const DEDUP_RADIUS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRecord<const D: usize> {
    pub t: f64,
    pub u: f64,
    pub point: [f64; D],
    pub distance: f64,
    /// Angle in `[0, π/2]` between the tangent lines at the crossing.
    pub crossing_angle: f64,
}

struct Problem<'a, const D: usize> {
    p: &'a RationalCurve<D>,
    q: &'a RationalCurve<D>,
}

impl<const D: usize> Problem<'_, D> {
    fn gap(&self, t: f64, u: f64) -> f64 {
        match (self.p.eval(t), self.q.eval(u)) {
            (Ok(a), Ok(b)) => distance(&a, &b),
            _ => f64::INFINITY,
        }
    }

    fn residual(&self, t: f64, u: f64) -> Option<[f64; D]> {
        let a = self.p.eval(t).ok()?;
        let b = self.q.eval(u).ok()?;
        let mut r = [0.0; D];
        for k in 0..D {
            r[k] = a[k] - b[k];
        }
        Some(r)
    }
}

fn derivative<const D: usize>(c: &RationalCurve<D>, t: f64) -> Option<[f64; D]> {
    let h = 1e-6;
    let (a, b) = ((t - h).max(0.0), (t + h).min(1.0));
    let pa = c.eval(a).ok()?;
    let pb = c.eval(b).ok()?;
    let mut d = [0.0; D];
    for k in 0..D {
        d[k] = (pb[k] - pa[k]) / (b - a);
    }
    Some(d)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn refine<const D: usize>(pr: &Problem<'_, D>, mut t: f64, mut u: f64, h: f64) -> (f64, f64) {
    for _ in 0..GOLDEN_SWEEPS {
        t = golden_min(|s| pr.gap(s, u), (t - h).max(0.0), (t + h).min(1.0));
        u = golden_min(|s| pr.gap(t, s), (u - h).max(0.0), (u + h).min(1.0));
    }
    // Gauss-Newton on P(t) - Q(u) = 0 with finite-difference Jacobian.
    for _ in 0..NEWTON_STEPS {
        let (Some(r), Some(dp), Some(dq)) =
            (pr.residual(t, u), derivative(pr.p, t), derivative(pr.q, u))
        else {
            break;
        };
        let dot = |a: &[f64; D], b: &[f64; D]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        // Columns of J are dp and -dq.
        let (a11, a12, a22) = (dot(&dp, &dp), -dot(&dp, &dq), dot(&dq, &dq));
        let (g1, g2) = (dot(&dp, &r), -dot(&dq, &r));
        let det = a11 * a22 - a12 * a12;
        if det.abs() <= 1e-300 {
            break;
        }
        let dt = -(a22 * g1 - a12 * g2) / det;
        let du = -(a11 * g2 - a12 * g1) / det;
        let (nt, nu) = ((t + dt).clamp(0.0, 1.0), (u + du).clamp(0.0, 1.0));
        if pr.gap(nt, nu) > pr.gap(t, u) {
            break;
        }
        let moved = (nt - t).abs().max((nu - u).abs());
        t = nt;
        u = nu;
        if moved < 1e-15 {
            break;
        }
    }
    (t, u)
}

fn crossing_angle<const D: usize>(
    p: &RationalCurve<D>,
    q: &RationalCurve<D>,
    t: f64,
    u: f64,
) -> f64 {
    let (Some(a), Some(b)) = (derivative(p, t), derivative(q, u)) else {
        return 0.0;
    };
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum();
    let nb: f64 = b.iter().map(|x| x * x).sum();
    let cross = (na * nb - dot * dot).max(0.0).sqrt();
    cross.atan2(dot.abs())
}

/// Brute-force intersections of two curves. `grid` is raised to at least
/// 64. Points closer than `1e-9` times the joint bounding-box diagonal count
/// as intersections.
pub fn oracle_intersect<const D: usize>(
    p: &RationalCurve<D>,
    q: &RationalCurve<D>,
    grid: usize,
) -> Vec<OracleRecord<D>> {
    let grid = grid.max(MIN_GRID);
    let point_tol = 1e-9 * joint_diagonal(&[p, q]);
    let pr = Problem { p, q };
    let params: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
    let sample = |c: &RationalCurve<D>| -> Vec<Option<[f64; D]>> {
        params.iter().map(|&t| c.eval(t).ok()).collect()
    };
    let ps = sample(p);
    let qs = sample(q);
    let step = |s: &[Option<[f64; D]>], i: usize| -> f64 {
        let seg = |a: usize, b: usize| match (s[a], s[b]) {
            (Some(x), Some(y)) => distance(&x, &y),
            _ => f64::INFINITY,
        };
        let left = if i > 0 { seg(i - 1, i) } else { 0.0 };
        let right = if i < grid { seg(i, i + 1) } else { 0.0 };
        left.max(right)
    };
    let gap = |i: usize, j: usize| match (ps[i], qs[j]) {
        (Some(a), Some(b)) => distance(&a, &b),
        _ => f64::INFINITY,
    };
    let dist: Vec<Vec<f64>> = (0..=grid)
        .map(|i| (0..=grid).map(|j| gap(i, j)).collect())
        .collect();

    let mut found: Vec<OracleRecord<D>> = Vec::new();
    for i in 0..=grid {
        for j in 0..=grid {
            let d = dist[i][j];
            if !d.is_finite() || d > 2.0 * (step(&ps, i) + step(&qs, j)) {
                continue;
            }
            let is_min = (i.saturating_sub(1)..=(i + 1).min(grid))
                .all(|a| (j.saturating_sub(1)..=(j + 1).min(grid)).all(|b| dist[a][b] >= d));
            if !is_min {
                continue;
            }
            let h = 2.0 / grid as f64;
            let (t, u) = refine(&pr, params[i], params[j], h);
            let gap = pr.gap(t, u);
            if gap > point_tol {
                continue;
            }
            if found
                .iter()
                .any(|r| (r.t - t).abs() < DEDUP_RADIUS && (r.u - u).abs() < DEDUP_RADIUS)
            {
                continue;
            }
            let (a, b) = (p.eval(t).unwrap(), q.eval(u).unwrap());
            let mut point = [0.0; D];
            for k in 0..D {
                point[k] = 0.5 * (a[k] + b[k]);
            }
            found.push(OracleRecord {
                t,
                u,
                point,
                distance: gap,
                crossing_angle: crossing_angle(p, q, t, u),
            });
        }
    }
    found.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.u.total_cmp(&b.u)));
    found
}

pub fn oracle_intersect2d(
    p: &RationalCurve2D,
    q: &RationalCurve2D,
    grid: usize,
) -> Vec<OracleRecord<2>> {
    oracle_intersect(p, q, grid)
}

pub fn oracle_intersect3d(
    p: &RationalCurve3D,
    q: &RationalCurve3D,
    grid: usize,
) -> Vec<OracleRecord<3>> {
    oracle_intersect(p, q, grid)
}
