use nalgebra::SVector;

use super::{Curve, CurveJet, CurveKind, Space, SPHERE_TOL};
use crate::error::{Error, Result};
use crate::numeric::{locate, stencil};

/// Nodes per centred finite-difference stencil.
const STENCIL: usize = 7;
/// Smallest accepted sample count.
const MIN_SAMPLES: usize = 5;

/// A curve given by samples on a strictly increasing grid covering `[0, 1]`.
///
/// Between nodes the jet is that of the degree-7 Hermite interpolant
/// matching position and the first three derivatives at both ends.
#[derive(Debug, Clone)]
pub struct SampledCurve<const D: usize> {
    space: Space,
    ts: Vec<f64>,
    points: Vec<SVector<f64, D>>,
    derivs: Vec<[SVector<f64, D>; 3]>,
    analytic: bool,
}

impl<const D: usize> SampledCurve<D> {
    /// Samples without derivative data; derivatives are estimated with
    /// 7-point finite-difference stencils, centred where possible.
    pub fn from_points(space: Space, ts: Vec<f64>, points: Vec<SVector<f64, D>>) -> Result<Self> {
        validate(space, &ts, &points)?;
        let derivs = finite_differences(&ts, &points);
        Ok(SampledCurve {
            space,
            ts,
            points,
            derivs,
            analytic: false,
        })
    }

    pub fn with_derivatives(
        space: Space,
        ts: Vec<f64>,
        points: Vec<SVector<f64, D>>,
        derivs: Vec<[SVector<f64, D>; 3]>,
    ) -> Result<Self> {
        validate(space, &ts, &points)?;
        if derivs.len() != ts.len() {
            return Err(Error::Schema(format!(
                "{} derivative records for {} samples",
                derivs.len(),
                ts.len()
            )));
        }
        Ok(SampledCurve {
            space,
            ts,
            points,
            derivs,
            analytic: true,
        })
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn points(&self) -> &[SVector<f64, D>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Whether the derivatives came with the data rather than from differencing.
    pub fn has_analytic_derivatives(&self) -> bool {
        self.analytic
    }

    /// The jet stored at node `i`.
    pub fn jet_at(&self, i: usize) -> CurveJet<D> {
        let [d1, d2, d3] = self.derivs[i];
        CurveJet([self.points[i], d1, d2, d3])
    }
}

fn validate<const D: usize>(space: Space, ts: &[f64], points: &[SVector<f64, D>]) -> Result<()> {
    if space.ambient_dim() != D {
        return Err(Error::Schema(format!(
            "{space:?} samples must have {} coordinates",
            space.ambient_dim()
        )));
    }
    if ts.len() != points.len() {
        return Err(Error::Schema(format!(
            "{} parameters for {} points",
            ts.len(),
            points.len()
        )));
    }
    if ts.len() < MIN_SAMPLES {
        return Err(Error::Range {
            what: "sample count",
            value: ts.len() as f64,
            expected: ">= 5 samples",
        });
    }
    if ts[0] != 0.0 || ts[ts.len() - 1] != 1.0 {
        return Err(Error::Schema("sample grid must start at 0 and end at 1".into()));
    }
    if let Some(w) = ts.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::Schema(format!(
            "sample grid not strictly increasing at t = {}",
            w[1]
        )));
    }
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(Error::Schema("non-finite sample coordinate".into()));
    }
    if space.is_sphere() {
        for (t, p) in ts.iter().zip(points) {
            let off = (p.norm() - 1.0).abs();
            if off > SPHERE_TOL {
                return Err(Error::Schema(format!(
                    "sample at t = {t} is off the unit sphere by {off:.3e}"
                )));
            }
        }
    }
    Ok(())
}

fn finite_differences<const D: usize>(ts: &[f64], points: &[SVector<f64, D>]) -> Vec<[SVector<f64, D>; 3]> {
    (0..ts.len())
        .map(|i| {
            let (start, w) = stencil(ts, i, STENCIL, 3);
            std::array::from_fn(|k| {
                w[k + 1]
                    .iter()
                    .enumerate()
                    .fold(SVector::<f64, D>::zeros(), |acc, (j, wj)| acc + points[start + j] * *wj)
            })
        })
        .collect()
}

impl<const D: usize> Curve<D> for SampledCurve<D> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        let t = t.clamp(0.0, 1.0);
        let i = locate(&self.ts, t);
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        if t == t0 {
            return self.jet_at(i);
        }
        if t == t1 {
            return self.jet_at(i + 1);
        }
        let h = t1 - t0;
        let s = (t - t0) / h;
        let c = septic_coefficients(&self.jet_at(i), &self.jet_at(i + 1), h);
        let mut out = [SVector::<f64, D>::zeros(); 4];
        for (order, slot) in out.iter_mut().enumerate() {
            // Horner on the `order`-th derivative in s, then rescale to t.
            let mut acc = SVector::<f64, D>::zeros();
            for k in (order..8).rev() {
                let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
                acc = acc * s + c[k] * falling;
            }
            *slot = acc / h.powi(order as i32);
        }
        CurveJet(out)
    }

    fn space(&self) -> Space {
        self.space
    }

    fn kind(&self) -> CurveKind {
        CurveKind::Samples
    }
}

/// Inverse of the end conditions `P^(j)(1)` on the coefficients of
/// `s^4 .. s^7`, `j = 0..3`.
const SEPTIC_END: [[f64; 4]; 4] = [
    [35.0, -15.0, 2.5, -1.0 / 6.0],
    [-84.0, 39.0, -7.0, 0.5],
    [70.0, -34.0, 6.5, -0.5],
    [-20.0, 10.0, -2.0, 1.0 / 6.0],
];

/// Coefficients in `s = (t - t0) / h` of the septic Hermite interpolant
/// between the jets `a` at `t0` and `b` at `t0 + h`.
fn septic_coefficients<const D: usize>(a: &CurveJet<D>, b: &CurveJet<D>, h: f64) -> [SVector<f64, D>; 8] {
    let mut c = [SVector::<f64, D>::zeros(); 8];
    let mut scale = 1.0;
    for (k, (ck, ak)) in c.iter_mut().zip(&a.0).enumerate() {
        // k! is folded into the scale: h^k / k!.
        *ck = ak * scale;
        scale *= h / (k + 1) as f64;
    }
    let mut residual = [SVector::<f64, D>::zeros(); 4];
    for (j, r) in residual.iter_mut().enumerate() {
        let target = b.0[j] * h.powi(j as i32);
        let known = (j..4).fold(SVector::<f64, D>::zeros(), |acc, k| {
            let falling: f64 = (0..j).map(|m| (k - m) as f64).product();
            acc + c[k] * falling
        });
        *r = target - known;
    }
    for (row, coeffs) in SEPTIC_END.iter().enumerate() {
        c[4 + row] = coeffs
            .iter()
            .zip(&residual)
            .fold(SVector::<f64, D>::zeros(), |acc, (w, r)| acc + r * *w);
    }
    c
}
