//! JSON curve files.
//!
//! ```json
//! {"space": true, "control": [[4, 0, 4], [1, 1, 1]], "weights": [1, 2]}
//! ```
//!
//! `weights` may be omitted (all ones). Numbers are written in shortest
//! round-trip form so a written file re-parses to bit-identical values.

use std::path::Path;

use relief_core::{RationalCurve2D, RationalCurve3D};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub space: bool,
    pub control: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Planar(RationalCurve2D),
    Space(RationalCurve3D),
}

fn fixed<const D: usize>(control: &[Vec<f64>]) -> Result<Vec<[f64; D]>, CliError> {
    control
        .iter()
        .enumerate()
        .map(|(i, c)| {
            <[f64; D]>::try_from(c.as_slice()).map_err(|_| {
                CliError::Input(format!(
                    "control point {i} has {} coordinates, expected {D}",
                    c.len()
                ))
            })
        })
        .collect()
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad curve file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn to_curve(&self) -> Result<Curve, CliError> {
        if self.control.len() < 2 {
            return Err(CliError::Input(
                "a curve needs at least two control points".into(),
            ));
        }
        let weights = match &self.weights {
            Some(w) if w.len() != self.control.len() => {
                return Err(CliError::Input(format!(
                    "{} control points but {} weights",
                    self.control.len(),
                    w.len()
                )))
            }
            Some(w) => w.clone(),
            None => vec![1.0; self.control.len()],
        };
        Ok(if self.space {
            Curve::Space(RationalCurve3D::new(fixed::<3>(&self.control)?, weights)?)
        } else {
            Curve::Planar(RationalCurve2D::new(fixed::<2>(&self.control)?, weights)?)
        })
    }

    pub fn from_planar(c: &RationalCurve2D) -> Self {
        CurveFile {
            space: false,
            control: c.control_points().iter().map(|p| p.to_vec()).collect(),
            weights: Some(c.weights()),
        }
    }

    pub fn from_space(c: &RationalCurve3D) -> Self {
        CurveFile {
            space: true,
            control: c.control_points().iter().map(|p| p.to_vec()).collect(),
            weights: Some(c.weights()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve files serialize")
    }
}

impl Curve {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        CurveFile::read(path)?.to_curve()
    }

    pub fn space(self, what: &str) -> Result<RationalCurve3D, CliError> {
        match self {
            Curve::Space(c) => Ok(c),
            Curve::Planar(_) => Err(CliError::Input(format!("{what}: expected a space curve"))),
        }
    }

    pub fn planar(self, what: &str) -> Result<RationalCurve2D, CliError> {
        match self {
            Curve::Planar(c) => Ok(c),
            Curve::Space(_) => Err(CliError::Input(format!("{what}: expected a planar curve"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_weights() {
        let f = CurveFile::parse(r#"{"space": false, "control": [[0, 0], [1, 2]]}"#).unwrap();
        let Curve::Planar(c) = f.to_curve().unwrap() else {
            panic!("expected planar")
        };
        assert_eq!(c.weights(), vec![1.0, 1.0]);

        let f = CurveFile::parse(
            r#"{"space": true, "control": [[4, 0, 4], [1, 1, 1]], "weights": [1, 2]}"#,
        )
        .unwrap();
        let Curve::Space(c) = f.to_curve().unwrap() else {
            panic!("expected space")
        };
        assert_eq!(c.control_points(), vec![[4.0, 0.0, 4.0], [1.0, 1.0, 1.0]]);
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            r#"{"space": true, "control": [[0, 0, 1], [1, 0, 1]], "weights": [1]}"#,
            r#"{"space": true, "control": [[0, 0], [1, 0]]}"#,
            r#"{"space": false, "control": [[0, 0]]}"#,
            r#"{"space": false, "control": [[0, 0], [1, 1]], "weights": [1, 0]}"#,
            r#"{"space": false, "control": [[0, 0], [1, 1]], "extra": 1}"#,
            r#"{"control": [[0, 0], [1, 1]]}"#,
            "not json",
        ] {
            let r = CurveFile::parse(bad).and_then(|f| f.to_curve());
            assert!(r.is_err(), "{bad}");
        }
    }

    #[test]
    fn written_files_reparse_bit_identically() {
        let c = RationalCurve3D::new(
            vec![
                [0.1, 1.0 / 3.0, 2.0f64.sqrt()],
                [1e-300, -7.25e18, std::f64::consts::PI],
            ],
            vec![0.7, 1.0 / 7.0],
        )
        .unwrap();
        let f = CurveFile::from_space(&c);
        let back = CurveFile::parse(&f.to_json()).unwrap();
        assert_eq!(back, f);
        for (a, b) in back
            .control
            .iter()
            .flatten()
            .zip(f.control.iter().flatten())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
