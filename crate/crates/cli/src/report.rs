//! Serializable run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use relief_core::pipeline::PipelineStats;
use relief_core::{
    ClipStats, IntersectionRecord2D, IntersectionRecord3D, RecordStatus, SpanDecomposition,
};
use serde::{Deserialize, Serialize};

use crate::curve_file::CurveFile;

pub type Diagnostics = BTreeMap<String, BTreeMap<String, u64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport<R> {
    pub records: Vec<R>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Accepted,
    ProjectionOnlyRejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record3D {
    pub status: Status,
    pub t: f64,
    pub u: f64,
    pub r_s: [f64; 2],
    pub r_r: Option<[f64; 3]>,
    pub r: Option<[f64; 3]>,
    pub residual3d: f64,
    pub residual_original: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record2D {
    pub t: f64,
    pub u: f64,
    pub point: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub k: f64,
    pub residual: f64,
    pub seed: CurveFile,
}

impl From<&IntersectionRecord3D> for Record3D {
    fn from(r: &IntersectionRecord3D) -> Self {
        Record3D {
            status: match r.status {
                RecordStatus::Accepted => Status::Accepted,
                RecordStatus::ProjectionOnlyRejected => Status::ProjectionOnlyRejected,
            },
            t: r.t.get(),
            u: r.u.get(),
            r_s: r.r_s,
            r_r: r.r_r.map(|p| p.to_array()),
            r: r.r.map(|p| p.to_array()),
            residual3d: r.residual3d,
            residual_original: r.residual_original,
        }
    }
}

impl From<&IntersectionRecord2D> for Record2D {
    fn from(r: &IntersectionRecord2D) -> Self {
        Record2D {
            t: r.t.get(),
            u: r.u.get(),
            point: r.point,
            residual: r.residual,
        }
    }
}

impl From<&SpanDecomposition> for SpanReport {
    fn from(d: &SpanDecomposition) -> Self {
        SpanReport {
            k: d.k,
            residual: d.residual,
            seed: CurveFile {
                space: false,
                control: d.seed.points().iter().map(|p| p.to_vec()).collect(),
                weights: Some(d.seed.weights().to_vec()),
            },
        }
    }
}

fn clip_counters(s: &ClipStats) -> BTreeMap<String, u64> {
    BTreeMap::from([
        ("clip_iterations".to_string(), s.clip_iterations),
        ("subdivisions".to_string(), s.subdivisions),
        ("near_misses".to_string(), s.near_misses),
        ("merged_duplicates".to_string(), s.merged_duplicates),
    ])
}

pub fn clip_diagnostics(s: &ClipStats) -> Diagnostics {
    BTreeMap::from([("clipping".to_string(), clip_counters(s))])
}

pub fn pipeline_diagnostics(s: &PipelineStats) -> Diagnostics {
    BTreeMap::from([
        ("clipping".to_string(), clip_counters(&s.clip)),
        (
            "preimage_test".to_string(),
            BTreeMap::from([
                ("accepted".to_string(), s.accepted),
                ("rejected".to_string(), s.rejected),
            ]),
        ),
    ])
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub trait TextLine {
    fn text_line(&self) -> String;
}

impl TextLine for Record3D {
    fn text_line(&self) -> String {
        let status = match self.status {
            Status::Accepted => "accepted",
            Status::ProjectionOnlyRejected => "rejected",
        };
        let mut line = format!(
            "{status} t={} u={} R_s={}",
            self.t,
            self.u,
            fmt_point(&self.r_s)
        );
        if let (Some(rr), Some(r)) = (self.r_r, self.r) {
            let _ = write!(line, " R_r={} R={}", fmt_point(&rr), fmt_point(&r));
        }
        let _ = write!(line, " residual3d={}", self.residual3d);
        line
    }
}

impl TextLine for Record2D {
    fn text_line(&self) -> String {
        format!(
            "t={} u={} point={} residual={}",
            self.t,
            self.u,
            fmt_point(&self.point),
            self.residual
        )
    }
}

impl<R: TextLine + Serialize> RunReport<R> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.text_line());
            out.push('\n');
        }
        for (stage, counters) in &self.diagnostics {
            let parts: Vec<String> = counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "# {stage}: {}", parts.join(" "));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
