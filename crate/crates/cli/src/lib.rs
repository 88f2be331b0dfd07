//! Command-line front end for `relief_core`.
//!
//! Curves are read from JSON curve files (see [`curve_file`]). Every
//! command returns its output as a string; [`run`] writes it to stdout or to
//! `--out` and maps errors to exit codes.

pub mod curve_file;
pub mod error;
pub mod plot;
pub mod report;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relief_core::clipping::intersect2d_with_stats;
use relief_core::pipeline::intersect_space_with_stats;
use relief_core::{
    apply_relief_to_curve, central_project, detect_span, ClipOptions, Direction, PipelineOptions,
    ReliefMap,
};

use crate::curve_file::{Curve, CurveFile};
use crate::error::CliError;
use crate::plot::{build_scene, markers_from_report, render_svg, DropAxis, PlotOptions};
use crate::report::{
    clip_diagnostics, pipeline_diagnostics, Record2D, Record3D, RunReport, SpanReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "relief",
    version,
    about = "Relief perspective and intersection of rational Bézier curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Span of the relief perspective.
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Parameter width at which clipping accepts a root.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_param: f64,
    /// Point tolerance: relief-space coincidence for `intersect3d`, planar
    /// residual for `intersect2d`. Defaults scale with the inputs.
    #[arg(long, global = true)]
    pub tol_point: Option<f64>,
    #[arg(long, global = true, default_value_t = 60)]
    pub max_depth: usize,
    /// Require inputs of `intersect3d` to be relief-form curves.
    #[arg(long, global = true)]
    pub strict_form8: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Samples per curve in plots.
    #[arg(long, global = true, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intersect two space curves through their relief and projection.
    Intersect3d {
        p: PathBuf,
        q: PathBuf,
        /// Planar residual tolerance for the clipping stage.
        #[arg(long)]
        tol_point2d: Option<f64>,
    },
    /// Intersect two planar curves by Bézier clipping.
    Intersect2d { p: PathBuf, q: PathBuf },
    /// Apply the relief perspective (or its inverse) to a space curve.
    Relief {
        file: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Project a space curve from the origin onto the plane z = 1.
    Project { file: PathBuf },
    /// Recover span and planar seed of a relief-form curve.
    DetectSpan {
        file: PathBuf,
        #[arg(long, default_value_t = relief_core::relief_curves::DEFAULT_SPAN_TOL)]
        tol: f64,
    },
    /// Draw curves, control polygons and, with --k, reliefs as SVG.
    Plot {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// JSON report from intersect2d or intersect3d to mark.
        #[arg(long)]
        intersections: Option<PathBuf>,
        /// Axis dropped by the view of space curves.
        #[arg(long, value_enum, default_value_t = DropAxis::Y)]
        drop: DropAxis,
    },
}

fn format_or(common: &Common, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Input(format!(
            "format {} is not available for this command",
            f.to_possible_value()
                .expect("no skipped variants")
                .get_name()
        )))
    }
}

fn curve_output(file: CurveFile, common: &Common) -> Result<String, CliError> {
    format_or(common, Format::Json, &[Format::Json])?;
    Ok(file.to_json() + "\n")
}

/// Runs a parsed command and returns what it prints.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Intersect3d { p, q, tol_point2d } => {
            let fmt = format_or(common, Format::Text, &[Format::Text, Format::Json])?;
            let p = Curve::read(p)?.space("P")?;
            let q = Curve::read(q)?.space("Q")?;
            let opts = PipelineOptions {
                k: common.k,
                tol_param: common.tol_param,
                tol_point2d: *tol_point2d,
                tol_point3d: common.tol_point,
                max_depth: common.max_depth,
                strict_form8: common.strict_form8,
            };
            let (records, stats) = intersect_space_with_stats(&p, &q, &opts)?;
            let report = RunReport {
                records: records.iter().map(Record3D::from).collect(),
                diagnostics: pipeline_diagnostics(&stats),
            };
            Ok(match fmt {
                Format::Json => report.to_json(),
                _ => report.to_text(),
            })
        }
        Command::Intersect2d { p, q } => {
            let fmt = format_or(common, Format::Text, &[Format::Text, Format::Json])?;
            let p = Curve::read(p)?.planar("P")?;
            let q = Curve::read(q)?.planar("Q")?;
            let opts = ClipOptions {
                tol_param: common.tol_param,
                tol_point: common.tol_point,
                max_depth: common.max_depth,
                ..ClipOptions::default()
            };
            let (records, stats) = intersect2d_with_stats(&p, &q, &opts)?;
            let report = RunReport {
                records: records.iter().map(Record2D::from).collect(),
                diagnostics: clip_diagnostics(&stats),
            };
            Ok(match fmt {
                Format::Json => report.to_json(),
                _ => report.to_text(),
            })
        }
        Command::Relief { file, inverse } => {
            let k = common
                .k
                .ok_or_else(|| CliError::Input("relief needs --k".into()))?;
            let c = Curve::read(file)?.space("input")?;
            let dir = if *inverse {
                Direction::Inverse
            } else {
                Direction::Forward
            };
            let out = apply_relief_to_curve(&c, &ReliefMap::new(k)?, dir)?;
            curve_output(CurveFile::from_space(&out), common)
        }
        Command::Project { file } => {
            let c = Curve::read(file)?.space("input")?;
            curve_output(CurveFile::from_planar(&central_project(&c)?), common)
        }
        Command::DetectSpan { file, tol } => {
            format_or(common, Format::Json, &[Format::Json])?;
            let c = Curve::read(file)?.space("input")?;
            let report = SpanReport::from(&detect_span(&c, *tol)?);
            Ok(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n")
        }
        Command::Plot {
            files,
            intersections,
            drop,
        } => {
            format_or(common, Format::Svg, &[Format::Svg])?;
            let curves = files
                .iter()
                .map(|f| Curve::read(f))
                .collect::<Result<Vec<_>, _>>()?;
            let markers = match intersections {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    markers_from_report(&text)?
                }
                None => Vec::new(),
            };
            let opts = PlotOptions {
                k: common.k,
                samples: common.samples,
                drop: *drop,
                markers,
            };
            Ok(render_svg(&build_scene(&curves, &opts)?))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.common.out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::from),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
