//! Curve and pair documents.
//!
//! A curve document names a catalog curve or lists samples:
//!
//! ```json
//! {"space": "S3", "kind": "catalog", "catalog": {"name": "gamma1", "m": 2}}
//! {"space": "S2", "kind": "samples", "samples": [{"t": 0, "x": [1, 0, 0]}, ...]}
//! ```
//!
//! A pair document holds two curves on `S2` and the shared uniform grid:
//! `{"left": {...}, "right": {...}, "grid": {"intervals": 512}}`.

use std::sync::Arc;

use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;
use crate::curves::{AnyCurve, Curve, Curve3, SampledCurve, Space};
use crate::decomp::PairCurve;
use crate::error::{Error, Result};
use crate::numeric::linspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Catalog,
    Samples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub space: Space,
    pub kind: DocKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Sample>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDecl {
    /// Number of intervals of the uniform grid on `[0, 1]`.
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDoc {
    pub left: CurveDoc,
    pub right: CurveDoc,
    pub grid: GridDecl,
}

impl CurveDoc {
    pub fn catalog(entry: CatalogEntry) -> Self {
        CurveDoc {
            space: entry.space(),
            kind: DocKind::Catalog,
            catalog: Some(entry),
            samples: None,
        }
    }

    /// Samples of `curve` at its grid nodes.
    pub fn from_sampled<const D: usize>(curve: &SampledCurve<D>) -> Self {
        CurveDoc {
            space: curve.space(),
            kind: DocKind::Samples,
            catalog: None,
            samples: Some(
                curve
                    .ts()
                    .iter()
                    .zip(curve.points())
                    .map(|(&t, p)| Sample {
                        t,
                        x: p.iter().copied().collect(),
                    })
                    .collect(),
            ),
        }
    }

    pub fn build(&self) -> Result<AnyCurve> {
        match self.kind {
            DocKind::Catalog => {
                let entry = self
                    .catalog
                    .as_ref()
                    .ok_or_else(|| Error::Schema("catalog document without \"catalog\" entry".into()))?;
                if entry.space() != self.space {
                    return Err(Error::Schema(format!(
                        "catalog curve lives on {:?}, document says {:?}",
                        entry.space(),
                        self.space
                    )));
                }
                entry.build()
            }
            DocKind::Samples => {
                let samples = self
                    .samples
                    .as_ref()
                    .ok_or_else(|| Error::Schema("samples document without \"samples\"".into()))?;
                match self.space.ambient_dim() {
                    3 => Ok(AnyCurve::Dim3(Arc::new(sampled::<3>(self.space, samples)?))),
                    _ => Ok(AnyCurve::Dim4(Arc::new(sampled::<4>(self.space, samples)?))),
                }
            }
        }
    }
}

fn sampled<const D: usize>(space: Space, samples: &[Sample]) -> Result<SampledCurve<D>> {
    let mut ts = Vec::with_capacity(samples.len());
    let mut points = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        if s.x.len() != D {
            return Err(Error::Schema(format!(
                "sample {i} has {} coordinates, {space:?} needs {D}",
                s.x.len()
            )));
        }
        ts.push(s.t);
        points.push(SVector::<f64, D>::from_column_slice(&s.x));
    }
    SampledCurve::from_points(space, ts, points)
}

impl PairDoc {
    pub fn from_pair(left: &SampledCurve<3>, right: &SampledCurve<3>, intervals: usize) -> Self {
        PairDoc {
            left: CurveDoc::from_sampled(left),
            right: CurveDoc::from_sampled(right),
            grid: GridDecl { intervals },
        }
    }

    /// Builds the pair; sampled members must sit on the declared grid.
    pub fn build(&self) -> Result<PairCurve> {
        let n = self.grid.intervals;
        if n < 4 {
            return Err(Error::Schema(format!("grid must have at least 4 intervals, got {n}")));
        }
        let grid = linspace(0.0, 1.0, n);
        let part = |doc: &CurveDoc, side: &str| -> Result<Curve3> {
            if doc.space != Space::S2 {
                return Err(Error::Schema(format!("{side} curve must lie on S2")));
            }
            if let Some(samples) = &doc.samples {
                let on_grid =
                    samples.len() == grid.len() && samples.iter().zip(&grid).all(|(s, g)| (s.t - g).abs() <= 1e-12);
                if doc.kind == DocKind::Samples && !on_grid {
                    return Err(Error::Schema(format!(
                        "{side} samples do not match the declared grid of {n} intervals"
                    )));
                }
            }
            match doc.build()? {
                AnyCurve::Dim3(c) => Ok(c),
                AnyCurve::Dim4(_) => Err(Error::Schema(format!("{side} curve must lie on S2"))),
            }
        };
        Ok(PairCurve::new(
            part(&self.left, "left")?,
            part(&self.right, "right")?,
            n,
        ))
    }
}

/// Parses a curve document.
pub fn read_curve(json: &str) -> Result<AnyCurve> {
    parse::<CurveDoc>(json)?.build()
}

/// Parses a pair document.
pub fn read_pair(json: &str) -> Result<PairCurve> {
    parse::<PairDoc>(json)?.build()
}

pub fn parse<T: for<'de> Deserialize<'de>>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{circle_sigma, gamma1, iterate};
    use crate::curves::sample;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn catalog_documents() {
        let c = read_curve(r#"{"space":"S3","kind":"catalog","catalog":{"name":"gamma1","m":2}}"#).unwrap();
        let AnyCurve::Dim4(c) = c else { panic!("expected S3") };
        assert!((c.point(1.0) - gamma1(2.0).point(1.0)).norm() < 1e-15);
        let err = read_curve(r#"{"space":"S2","kind":"catalog","catalog":{"name":"gamma1"}}"#).unwrap_err();
        assert_eq!(err.name(), "SchemaError");
        assert_eq!(read_curve("{not json").unwrap_err().name(), "SchemaError");
        assert_eq!(
            read_curve(r#"{"space":"S2","kind":"catalog","catalog":{"name":"sigma","c":-1}}"#)
                .unwrap_err()
                .name(),
            "RangeError"
        );
    }

    #[test]
    fn sample_round_trip() {
        let s = sample(&circle_sigma(PI).unwrap(), 64).unwrap();
        let doc = CurveDoc::from_sampled(&s);
        let json = to_json(&doc);
        let AnyCurve::Dim3(back) = read_curve(&json).unwrap() else {
            panic!()
        };
        for i in 0..=64 {
            let t = i as f64 / 64.0;
            assert!((back.point(t) - s.point(t)).norm() < 1e-12);
        }
        let mut bad = doc.clone();
        bad.samples.as_mut().unwrap()[3].x.pop();
        assert_eq!(bad.build().unwrap_err().name(), "SchemaError");
    }

    #[test]
    fn pair_documents() {
        let n = 32;
        let l = sample(&circle_sigma(PI).unwrap(), n).unwrap();
        let r = sample(&iterate(circle_sigma(TAU).unwrap(), 0.5), n).unwrap();
        let json = to_json(&PairDoc::from_pair(&l, &r, n));
        let pair = read_pair(&json).unwrap();
        assert_eq!(pair.samples, n);
        let wrong = json.replace("\"intervals\": 32", "\"intervals\": 16");
        assert_eq!(read_pair(&wrong).unwrap_err().name(), "SchemaError");
    }
}
