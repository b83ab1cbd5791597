//! Frenet frames, curvature and torsion, log-derivatives of frame paths, and
//! integration of Jacobian frame curves `G' = G Lambda`.
//!
//! For a curve on `S^n` (`D = n + 1`) the derivative matrix
//! `M = (x, x', ..., x^(n))` factors as `M = F R` with `F` special orthogonal
//! and `R` upper triangular. `F` is built by Gram-Schmidt on the first `n`
//! columns and completed to a positive basis, so the factorisation exists
//! for generic curves whether or not they are locally convex.

use std::fmt::Write as _;

use nalgebra::{SMatrix, SVector};
use rayon::prelude::*;

use crate::curves::{derivative_matrix, Curve, CurveJet, SampledCurve, Space};
use crate::error::{Error, Result};
use crate::numeric::{determinant, linspace, max_principal_angle, stencil};
use crate::quatspin::Rotation;

/// Relative pivot size below which derivative vectors count as dependent.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Normalised determinant threshold for local convexity.
pub const CONVEXITY_TOL: f64 = 1e-10;
/// Largest rotation between consecutive frames accepted by [`log_derivative`].
pub const LOG_DERIVATIVE_MAX_STEP: f64 = std::f64::consts::FRAC_PI_4;

/// `F` and `R` in `(x, x', ..., x^(n)) = F R` at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetPoint<const D: usize> {
    pub frame: Rotation<D>,
    pub remainder: SMatrix<f64, D, D>,
}

impl<const D: usize> FrenetPoint<D> {
    /// Speed, geodesic curvature and (for `D = 4`) torsion.
    pub fn invariants(&self) -> (f64, f64, Option<f64>) {
        let r = &self.remainder;
        let v = r[(1, 1)];
        let kappa = r[(2, 2)] / (v * v);
        let tau = (D == 4).then(|| r[(3, 3)] / (v * r[(2, 2)]));
        (v, kappa, tau)
    }

    /// Subdiagonal of the log-derivative: `(v, v kappa)` or `(v, v kappa, v tau)`.
    pub fn subdiagonal(&self) -> Vec<f64> {
        let (v, kappa, tau) = self.invariants();
        let mut sub = vec![v, v * kappa];
        sub.extend(tau.map(|tau| v * tau));
        sub
    }
}

/// Frenet frame and remainder of `curve` at `t`.
pub fn frenet_frame<const D: usize>(curve: &(impl Curve<D> + ?Sized), t: f64) -> Result<FrenetPoint<D>> {
    frenet_from_jet(&curve.jet(t), t)
}

/// Frenet frame and remainder from a precomputed jet; `t` is only used for
/// error reporting.
pub fn frenet_from_jet<const D: usize>(jet: &CurveJet<D>, t: f64) -> Result<FrenetPoint<D>> {
    let m = derivative_matrix(jet);
    let mut f = SMatrix::<f64, D, D>::zeros();
    for k in 0..D - 1 {
        let col = m.column(k).into_owned();
        let scale = col.norm().max(1.0);
        let mut v = col;
        // Two passes of classical Gram-Schmidt.
        for _ in 0..2 {
            for j in 0..k {
                let c = f.column(j).dot(&v);
                v -= f.column(j) * c;
            }
        }
        let pivot = v.norm();
        if !(pivot > DEGENERACY_TOL * scale) {
            return Err(Error::Degeneracy { t, pivot });
        }
        f.set_column(k, &(v / pivot));
    }
    let last = complete_basis(&f);
    f.set_column(D - 1, &last);
    if determinant(&f) < 0.0 {
        f.set_column(D - 1, &(-last));
    }
    let mut remainder = f.transpose() * m;
    for c in 0..D {
        for r in c + 1..D {
            remainder[(r, c)] = 0.0;
        }
    }
    Ok(FrenetPoint {
        frame: Rotation::new_unchecked(f),
        remainder,
    })
}

/// Unit vector orthogonal to the first `D - 1` columns of `f`.
fn complete_basis<const D: usize>(f: &SMatrix<f64, D, D>) -> SVector<f64, D> {
    let residual = |i: usize| {
        let mut v = SVector::<f64, D>::zeros();
        v[i] = 1.0;
        for _ in 0..2 {
            for j in 0..D - 1 {
                let c = f.column(j).dot(&v);
                v -= f.column(j) * c;
            }
        }
        v
    };
    let best = (0..D)
        .map(residual)
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_else(SVector::zeros);
    best.normalize()
}

/// Signed geodesic curvature of a curve on `S2`.
pub fn curvature_s2(curve: &(impl Curve<3> + ?Sized), t: f64) -> Result<f64> {
    let jet = curve.jet(t);
    let speed = jet.speed();
    if !(speed >= 1e-12) {
        return Err(Error::Immersion { t, speed });
    }
    Ok(frenet_from_jet(&jet, t)?.invariants().1)
}

/// Curvature and torsion of a generic curve on `S3`.
pub fn curvature_torsion_s3(curve: &(impl Curve<4> + ?Sized), t: f64) -> Result<(f64, f64)> {
    let (_, kappa, tau) = frenet_frame(curve, t)?.invariants();
    Ok((kappa, tau.unwrap_or(f64::NAN)))
}

/// Result of sampling `det(x, x', ..., x^(n))` over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConvexity {
    pub convex: bool,
    /// Minimum of the raw determinant.
    pub min_det: f64,
    /// Minimum of `det / |x'|^(n(n+1)/2)`, which is invariant under
    /// reparametrisation and equals `kappa^2 tau` on `S3`, `kappa` on `S2`.
    pub min_normalized_det: f64,
    pub t_min: f64,
}

/// Local-convexity test on a uniform grid of `n + 1` points.
///
/// The verdict uses the normalised determinant so that it does not depend
/// on the speed of the parametrisation.
pub fn local_convexity_check<const D: usize>(curve: &(impl Curve<D> + ?Sized), n: usize) -> LocalConvexity {
    let power = (D * (D - 1) / 2) as i32;
    let values: Vec<(f64, f64, f64)> = linspace(0.0, 1.0, n)
        .into_par_iter()
        .map(|t| {
            let jet = curve.jet(t);
            let det = determinant(&derivative_matrix(&jet));
            (t, det, det / jet.speed().powi(power))
        })
        .collect();
    let mut report = LocalConvexity {
        convex: true,
        min_det: f64::INFINITY,
        min_normalized_det: f64::INFINITY,
        t_min: 0.0,
    };
    for (t, det, normalized) in values {
        report.min_det = report.min_det.min(det);
        if !(normalized >= report.min_normalized_det) {
            report.min_normalized_det = normalized;
            report.t_min = t;
        }
    }
    report.convex = report.min_normalized_det > CONVEXITY_TOL;
    report
}

/// Frames and remainders of a curve along a parameter grid.
#[derive(Debug, Clone)]
pub struct FrameCurve<const D: usize> {
    pub ts: Vec<f64>,
    pub frames: Vec<Rotation<D>>,
    pub remainders: Vec<SMatrix<f64, D, D>>,
}

impl<const D: usize> FrameCurve<D> {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn point(&self, i: usize) -> FrenetPoint<D> {
        FrenetPoint {
            frame: self.frames[i],
            remainder: self.remainders[i],
        }
    }

    /// Whether every remainder has a strictly positive diagonal.
    pub fn is_positive(&self) -> bool {
        self.remainders.iter().all(|r| (0..D).all(|k| r[(k, k)] > 0.0))
    }

    pub fn profile(&self) -> JacobiProfile {
        let mut profile = JacobiProfile {
            space: Space::for_dim(D, true),
            ts: self.ts.clone(),
            speed: Vec::with_capacity(self.len()),
            kappa: Vec::with_capacity(self.len()),
            tau: Vec::new(),
        };
        for i in 0..self.len() {
            let (v, kappa, tau) = self.point(i).invariants();
            profile.speed.push(v);
            profile.kappa.push(kappa);
            profile.tau.extend(tau);
        }
        profile
    }

    /// CSV with columns `t`, the frame entries row-major, `kappa`, `tau`, `det`.
    /// `tau` is empty for curves on `S2`; `det` is `det R = det(x, ..., x^(n))`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for r in 1..=D {
            for c in 1..=D {
                let _ = write!(out, ",f{r}{c}");
            }
        }
        out.push_str(",kappa,tau,det\n");
        for i in 0..self.len() {
            let p = self.point(i);
            let (_, kappa, tau) = p.invariants();
            let _ = write!(out, "{}", self.ts[i]);
            for r in 0..D {
                for c in 0..D {
                    let _ = write!(out, ",{}", p.frame.matrix()[(r, c)]);
                }
            }
            let det: f64 = (0..D).map(|k| p.remainder[(k, k)]).product();
            let tau = tau.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(out, ",{kappa},{tau},{det}");
        }
        out
    }
}

/// Frenet frames of `curve` at the given parameters.
pub fn frame_curve<const D: usize>(curve: &(impl Curve<D> + ?Sized), ts: &[f64]) -> Result<FrameCurve<D>> {
    let points: Vec<Result<FrenetPoint<D>>> = ts.par_iter().map(|&t| frenet_frame(curve, t)).collect();
    let mut out = FrameCurve {
        ts: ts.to_vec(),
        frames: Vec::with_capacity(ts.len()),
        remainders: Vec::with_capacity(ts.len()),
    };
    for p in points {
        let p = p?;
        out.frames.push(p.frame);
        out.remainders.push(p.remainder);
    }
    Ok(out)
}

/// Frenet frames on the uniform grid with `n + 1` points.
pub fn frame_curve_uniform<const D: usize>(curve: &(impl Curve<D> + ?Sized), n: usize) -> Result<FrameCurve<D>> {
    frame_curve(curve, &linspace(0.0, 1.0, n))
}

/// Speed, curvature and torsion along a grid: the subdiagonal data of the
/// log-derivative `Lambda = (v, v kappa, v tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiProfile {
    pub space: Space,
    pub ts: Vec<f64>,
    pub speed: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Empty for curves on `S2`.
    pub tau: Vec<f64>,
}

impl JacobiProfile {
    pub fn subdiagonal(&self, i: usize) -> Vec<f64> {
        let v = self.speed[i];
        let mut sub = vec![v, v * self.kappa[i]];
        if let Some(tau) = self.tau.get(i) {
            sub.push(v * tau);
        }
        sub
    }

    pub fn lambda<const D: usize>(&self, i: usize) -> SMatrix<f64, D, D> {
        jacobi_matrix(&self.subdiagonal(i))
    }
}

/// Tridiagonal skew-symmetric matrix with the given subdiagonal.
pub fn jacobi_matrix<const D: usize>(sub: &[f64]) -> SMatrix<f64, D, D> {
    let mut m = SMatrix::<f64, D, D>::zeros();
    for (k, &c) in sub.iter().enumerate().take(D - 1) {
        m[(k + 1, k)] = c;
        m[(k, k + 1)] = -c;
    }
    m
}

/// `Lambda(t_i) = F(t_i)^T F'(t_i)` with `F'` from 5-point finite differences,
/// projected onto the skew-symmetric matrices.
pub fn log_derivative<const D: usize>(fc: &FrameCurve<D>) -> Result<Vec<SMatrix<f64, D, D>>> {
    if fc.len() < 5 {
        return Err(Error::Range {
            what: "frame count",
            value: fc.len() as f64,
            expected: ">= 5",
        });
    }
    for (i, pair) in fc.frames.windows(2).enumerate() {
        let step = pair[0].matrix().transpose() * pair[1].matrix();
        let angle = max_principal_angle(&step);
        if !(angle < LOG_DERIVATIVE_MAX_STEP) {
            return Err(Error::Density {
                index: i,
                angle,
                limit: LOG_DERIVATIVE_MAX_STEP,
            });
        }
    }
    Ok((0..fc.len())
        .into_par_iter()
        .map(|i| {
            let (start, w) = stencil(&fc.ts, i, 5, 1);
            let derivative = w[1]
                .iter()
                .enumerate()
                .fold(SMatrix::<f64, D, D>::zeros(), |acc, (j, wj)| {
                    acc + fc.frames[start + j].matrix() * *wj
                });
            let l = fc.frames[i].matrix().transpose() * derivative;
            (l - l.transpose()) * 0.5
        })
        .collect())
}

/// Output of [`integrate_jacobian`]: the frame path and the curve `G(t) e1`.
#[derive(Debug, Clone)]
pub struct JacobianCurve<const D: usize> {
    pub frames: FrameCurve<D>,
    pub curve: SampledCurve<D>,
}

/// Step used to difference `Lambda` for the second and third curve derivatives.
const LAMBDA_FD_STEP: f64 = 1e-3;

/// Solves `G' = G Lambda(t)`, `G(0) = I` on `[0, 1]` with classical RK4 and
/// Gram-Schmidt re-orthonormalisation of the rows after every step.
///
/// Every subdiagonal entry of `Lambda` must be positive at the grid points
/// and step midpoints.
pub fn integrate_jacobian<const D: usize>(
    lambda: impl Fn(f64) -> SMatrix<f64, D, D> + Sync,
    steps: usize,
) -> Result<JacobianCurve<D>> {
    if steps < 4 {
        return Err(Error::Range {
            what: "integration steps",
            value: steps as f64,
            expected: ">= 4",
        });
    }
    let ts = linspace(0.0, 1.0, steps);
    let h = 1.0 / steps as f64;
    for k in 0..=2 * steps {
        let t = (k as f64 * 0.5 * h).min(1.0);
        let l = lambda(t);
        for entry in 0..D - 1 {
            let value = l[(entry + 1, entry)];
            if !(value > 0.0) {
                return Err(Error::Jacobi {
                    t,
                    entry: entry + 1,
                    value,
                });
            }
        }
    }
    let mut g = SMatrix::<f64, D, D>::identity();
    let mut frames = Vec::with_capacity(ts.len());
    frames.push(Rotation::new_unchecked(g));
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let h = t1 - t0;
        let mid = lambda(t0 + 0.5 * h);
        let k1 = g * lambda(t0);
        let k2 = (g + k1 * (0.5 * h)) * mid;
        let k3 = (g + k2 * (0.5 * h)) * mid;
        let k4 = (g + k3 * h) * lambda(t1);
        g += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        g = orthonormalize_rows(&g);
        frames.push(Rotation::new_unchecked(g));
    }
    let (remainders, derivs): (Vec<_>, Vec<_>) = ts
        .par_iter()
        .zip(frames.par_iter())
        .map(|(&t, frame)| {
            let v = frame_derivative_vectors(&lambda, t);
            let remainder = SMatrix::<f64, D, D>::from_fn(|r, c| v[c.min(3)][r]);
            let g = frame.matrix();
            (remainder, [g * v[1], g * v[2], g * v[3]])
        })
        .unzip();
    let points = frames.iter().map(|f| f.matrix().column(0).into_owned()).collect();
    let curve = SampledCurve::with_derivatives(Space::for_dim(D, true), ts.clone(), points, derivs)?;
    Ok(JacobianCurve {
        frames: FrameCurve { ts, frames, remainders },
        curve,
    })
}

/// `v_k` with `x^(k) = G v_k`: `e1`, `L e1`, `(L^2 + L') e1`,
/// `(L^3 + 2 L L' + L' L + L'') e1`.
fn frame_derivative_vectors<const D: usize>(
    lambda: &impl Fn(f64) -> SMatrix<f64, D, D>,
    t: f64,
) -> [SVector<f64, D>; 4] {
    let nodes: Vec<f64> = (-2..=2).map(|k| t + k as f64 * LAMBDA_FD_STEP).collect();
    let shift = if nodes[0] < 0.0 {
        -nodes[0]
    } else if nodes[4] > 1.0 {
        1.0 - nodes[4]
    } else {
        0.0
    };
    let nodes: Vec<f64> = nodes.iter().map(|x| x + shift).collect();
    let w = crate::numeric::fornberg_weights(t, &nodes, 2);
    let values: Vec<_> = nodes.iter().map(|&x| lambda(x)).collect();
    let diff = |order: usize| {
        values
            .iter()
            .zip(&w[order])
            .fold(SMatrix::<f64, D, D>::zeros(), |acc, (m, wj)| acc + m * *wj)
    };
    derivative_vectors(&lambda(t), &diff(1), &diff(2))
}

/// `v_k` with `x^(k) = G v_k` for a frame path with log-derivative `l` and
/// its derivatives `l1`, `l2`.
pub(crate) fn derivative_vectors<const D: usize>(
    l: &SMatrix<f64, D, D>,
    l1: &SMatrix<f64, D, D>,
    l2: &SMatrix<f64, D, D>,
) -> [SVector<f64, D>; 4] {
    let mut e1 = SVector::<f64, D>::zeros();
    e1[0] = 1.0;
    [
        e1,
        l * e1,
        (l * l + l1) * e1,
        (l * l * l + l * l1 * 2.0 + l1 * l + l2) * e1,
    ]
}

/// Gram-Schmidt on the rows, preserving orientation.
pub fn orthonormalize_rows<const D: usize>(g: &SMatrix<f64, D, D>) -> SMatrix<f64, D, D> {
    let mut out = *g;
    for i in 0..D {
        let mut row = out.row(i).into_owned();
        for j in 0..i {
            let c = out.row(j).dot(&row);
            row -= out.row(j) * c;
        }
        out.set_row(i, &(row / row.norm()));
    }
    out
}
