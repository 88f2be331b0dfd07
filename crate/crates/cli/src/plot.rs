//! SVG plots of curves, their control polygons and reliefs.
//!
//! Space curves are drawn in an axonometric view; with `--k` the relief of
//! each space curve is overlaid together with the two planes bounding the
//! relief slab, `z = 1` and `z = 1 + k`.

use std::fmt::Write as _;

use clap::ValueEnum;
use relief_core::{apply_relief_to_curve, Direction, Point3, RationalCurve, ReliefMap};

use crate::curve_file::Curve;
use crate::error::CliError;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.05;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

/// Axis dropped by the axonometric view of space curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DropAxis {
    X,
    Y,
    Z,
    /// Isometric view.
    Iso,
}

impl DropAxis {
    pub fn project(self, p: Point3) -> [f64; 2] {
        match self {
            DropAxis::X => [p.y, p.z],
            DropAxis::Y => [p.x, p.z],
            DropAxis::Z => [p.x, p.y],
            DropAxis::Iso => {
                let c = 3f64.sqrt() / 2.0;
                [c * (p.x - p.y), p.z - 0.5 * (p.x + p.y)]
            }
        }
    }

    /// True when planes `z = c` appear as horizontal lines.
    fn shows_depth_planes(self) -> bool {
        matches!(self, DropAxis::X | DropAxis::Y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marker {
    Accepted(Point3),
    Rejected(Point3),
    Planar([f64; 2]),
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub k: Option<f64>,
    pub samples: usize,
    pub drop: DropAxis,
    pub markers: Vec<Marker>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            k: None,
            samples: 256,
            drop: DropAxis::Y,
            markers: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Curve,
    Control,
    Relief,
    ReliefControl,
    Guide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub role: Role,
    pub curve: usize,
    pub points: Vec<[f64; 2]>,
}

/// Plot content in view coordinates, before fitting to the viewport.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub layers: Vec<Layer>,
    pub markers: Vec<(Marker, [f64; 2])>,
    /// Relief samples of each space curve, in relief space.
    pub relief_samples: Vec<Vec<Point3>>,
}

fn sample<const D: usize>(c: &RationalCurve<D>, n: usize) -> Result<Vec<[f64; D]>, CliError> {
    (0..n)
        .map(|i| c.eval(i as f64 / (n - 1) as f64).map_err(CliError::from))
        .collect()
}

pub fn build_scene(curves: &[Curve], opts: &PlotOptions) -> Result<Scene, CliError> {
    if curves.is_empty() {
        return Err(CliError::Input("nothing to plot".into()));
    }
    if opts.samples < 2 {
        return Err(CliError::Input(
            "need at least two samples per curve".into(),
        ));
    }
    let relief = opts.k.map(ReliefMap::new).transpose()?;
    let view = |p: [f64; 3]| opts.drop.project(Point3::from(p));
    let mut scene = Scene::default();
    for (idx, curve) in curves.iter().enumerate() {
        match curve {
            Curve::Planar(c) => {
                scene.layers.push(Layer {
                    role: Role::Control,
                    curve: idx,
                    points: c.control_points(),
                });
                scene.layers.push(Layer {
                    role: Role::Curve,
                    curve: idx,
                    points: sample(c, opts.samples)?,
                });
            }
            Curve::Space(c) => {
                scene.layers.push(Layer {
                    role: Role::Control,
                    curve: idx,
                    points: c.control_points().into_iter().map(view).collect(),
                });
                scene.layers.push(Layer {
                    role: Role::Curve,
                    curve: idx,
                    points: sample(c, opts.samples)?.into_iter().map(view).collect(),
                });
                if let Some(r) = &relief {
                    let rc = apply_relief_to_curve(c, r, Direction::Forward)?;
                    let pts = sample(&rc, opts.samples)?;
                    scene.layers.push(Layer {
                        role: Role::ReliefControl,
                        curve: idx,
                        points: rc.control_points().into_iter().map(view).collect(),
                    });
                    scene.layers.push(Layer {
                        role: Role::Relief,
                        curve: idx,
                        points: pts.iter().map(|p| view(*p)).collect(),
                    });
                    scene
                        .relief_samples
                        .push(pts.into_iter().map(Point3::from).collect());
                }
            }
        }
    }
    if let (Some(r), true) = (&relief, opts.drop.shows_depth_planes()) {
        let xs = scene
            .layers
            .iter()
            .flat_map(|l| l.points.iter().map(|p| p[0]));
        let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
            (a.min(x), b.max(x))
        });
        for z in [r.image_plane_z(), r.vanishing_plane_z()] {
            scene.layers.push(Layer {
                role: Role::Guide,
                curve: 0,
                points: vec![[lo, z], [hi, z]],
            });
        }
    }
    for m in &opts.markers {
        let at = match *m {
            Marker::Accepted(p) | Marker::Rejected(p) => opts.drop.project(p),
            Marker::Planar(p) => p,
        };
        scene.markers.push((*m, at));
    }
    Ok(scene)
}

fn fit(scene: &Scene) -> impl Fn([f64; 2]) -> [f64; 2] {
    let all = scene
        .layers
        .iter()
        .flat_map(|l| l.points.iter().copied())
        .chain(scene.markers.iter().map(|m| m.1));
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = [(hi[0] - lo[0]).max(1e-12), (hi[1] - lo[1]).max(1e-12)];
    let inner = [WIDTH * (1.0 - 2.0 * MARGIN), HEIGHT * (1.0 - 2.0 * MARGIN)];
    let scale = (inner[0] / span[0]).min(inner[1] / span[1]);
    let cx = 0.5 * (lo[0] + hi[0]);
    let cy = 0.5 * (lo[1] + hi[1]);
    move |p| {
        [
            0.5 * WIDTH + scale * (p[0] - cx),
            0.5 * HEIGHT - scale * (p[1] - cy),
        ]
    }
}

fn points_attr(points: &[[f64; 2]], to_screen: &impl Fn([f64; 2]) -> [f64; 2]) -> String {
    let parts: Vec<String> = points
        .iter()
        .map(|p| {
            let s = to_screen(*p);
            format!("{:.2},{:.2}", s[0], s[1])
        })
        .collect();
    parts.join(" ")
}

pub fn render_svg(scene: &Scene) -> String {
    let to_screen = fit(scene);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    for layer in &scene.layers {
        let colour = PALETTE[layer.curve % PALETTE.len()];
        let pts = points_attr(&layer.points, &to_screen);
        let _ = match layer.role {
            Role::Guide => writeln!(
                out,
                "<polyline class=\"slab\" points=\"{pts}\" fill=\"none\" stroke=\"#666666\" stroke-width=\"0.75\" stroke-dasharray=\"1 3\"/>"
            ),
            Role::Control => writeln!(
                out,
                "<polyline class=\"control\" data-curve=\"{}\" points=\"{pts}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\"/>",
                layer.curve
            ),
            Role::ReliefControl => writeln!(
                out,
                "<polyline class=\"relief-control\" data-curve=\"{}\" points=\"{pts}\" fill=\"none\" stroke=\"{colour}\" stroke-opacity=\"0.4\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\"/>",
                layer.curve
            ),
            Role::Curve => writeln!(
                out,
                "<polyline class=\"curve\" data-curve=\"{}\" points=\"{pts}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\"/>",
                layer.curve
            ),
            Role::Relief => writeln!(
                out,
                "<polyline class=\"relief\" data-curve=\"{}\" points=\"{pts}\" fill=\"none\" stroke=\"{colour}\" stroke-opacity=\"0.7\" stroke-width=\"1.5\"/>",
                layer.curve
            ),
        };
    }
    for (m, at) in &scene.markers {
        let s = to_screen(*at);
        let (class, fill) = match m {
            Marker::Rejected(_) => ("marker rejected", "none"),
            _ => ("marker", "black"),
        };
        let _ = writeln!(
            out,
            "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{fill}\" stroke=\"black\"/>",
            s[0], s[1]
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Markers from a JSON run report written by `intersect2d` or
/// `intersect3d`.
pub fn markers_from_report(text: &str) -> Result<Vec<Marker>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("bad intersection report: {e}")))?;
    let records = value
        .get("records")
        .and_then(|r| r.as_array())
        .ok_or_else(|| CliError::Input("intersection report has no records".into()))?;
    let coords = |v: Option<&serde_json::Value>| -> Option<Vec<f64>> {
        v?.as_array()?.iter().map(|c| c.as_f64()).collect()
    };
    let mut markers = Vec::new();
    for rec in records {
        if let Some(r) = coords(rec.get("r")).filter(|c| c.len() == 3) {
            markers.push(Marker::Accepted(Point3::new(r[0], r[1], r[2])));
        } else if let Some(s) = coords(rec.get("r_s")).filter(|c| c.len() == 2) {
            markers.push(Marker::Rejected(Point3::new(s[0], s[1], 1.0)));
        } else if let Some(p) = coords(rec.get("point")).filter(|c| c.len() == 2) {
            markers.push(Marker::Planar([p[0], p[1]]));
        } else {
            return Err(CliError::Input(
                "intersection record without a point".into(),
            ));
        }
    }
    Ok(markers)
}
