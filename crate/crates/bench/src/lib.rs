//! Fixed inputs for the benchmarks.

use relief_core::{build_q, PlanarSeed, RationalCurve2D, RationalCurve3D};

/// Two planar rational cubics crossing three times.
pub fn crossing_cubics() -> (RationalCurve2D, RationalCurve2D) {
    let p = RationalCurve2D::new(
        vec![[0.0, 0.0], [0.3, 1.0], [0.7, -1.0], [1.0, 0.0]],
        vec![1.0, 1.5, 1.5, 1.0],
    )
    .unwrap();
    let q = RationalCurve2D::new(
        vec![
            [-0.1, 0.05],
            [0.3, 0.05 / 3.0],
            [0.7, -0.05 / 3.0],
            [1.1, -0.05],
        ],
        vec![1.0, 0.7, 1.3, 1.0],
    )
    .unwrap();
    (p, q)
}

/// Two space cubics in relief form for span 2 whose projections cross once.
pub fn relief_form_pair() -> (RationalCurve3D, RationalCurve3D) {
    let p = PlanarSeed::new(
        vec![[-1.0, 0.1], [-0.3, -0.2], [0.4, 0.15], [1.0, -0.1]],
        vec![1.2, 2.0, 1.6, 2.4],
    )
    .unwrap();
    let q = PlanarSeed::new(
        vec![[0.1, -1.0], [-0.15, -0.3], [0.2, 0.4], [-0.1, 1.0]],
        vec![1.5, 1.1, 2.2, 1.8],
    )
    .unwrap();
    (build_q(&p, 2.0).unwrap(), build_q(&q, 2.0).unwrap())
}
