//! Correspondence between locally convex curves on `S3` and pairs of curves
//! on `S2` (left and right parts).
//!
//! The Frenet frame of a curve on `S3` lifts to a path `(zl, zr)` in
//! `S3 x S3`. With log-derivative `Lambda x = wl x - x wr` the factors satisfy
//! `zl' = zl wl`, `zr' = zr wr`, and the parts are `zl i conj(zl)` and
//! `zr i conj(zr)`. The left part has speed `v kappa` and curvature
//! `(1 + tau) / kappa`; the right part has the same speed and curvature
//! `(tau - 1) / kappa`.

use std::sync::Arc;

use nalgebra::{Matrix3, Matrix4};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{Curve, Curve3, SampledCurve, Space};
use crate::error::{Error, Result};
use crate::frenet::{
    curvature_s2, derivative_vectors, frame_curve, integrate_jacobian, jacobi_matrix, local_convexity_check, FrameCurve,
};
use crate::numeric::{linspace, stencil};
use crate::quatspin::{
    left_mul_matrix, lift_path_spin3, lift_path_spin4, project_spin3, right_mul_matrix, Quaternion, SpinPair,
    UnitQuaternion,
};

/// Relative tolerance on `|gl'| = |gr'|`.
pub const SPEED_MATCH_TOL: f64 = 1e-6;
/// Required margin in `kappa_l > |kappa_r|`.
pub const CONDITION_L_MARGIN: f64 = 1e-9;

/// Angular velocities `(wl, wr)` with `Lambda x = wl x - x wr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSplit {
    pub omega_l: Quaternion,
    pub omega_r: Quaternion,
}

impl SpinSplit {
    /// The matrix `x -> wl x - x wr` in the basis `(1, i, j, k)`.
    pub fn reconstruct(&self) -> Matrix4<f64> {
        left_mul_matrix(self.omega_l) - right_mul_matrix(self.omega_r)
    }
}

/// Split of the Jacobi matrix with subdiagonal `(s, s kappa, s tau)`.
pub fn split_log_derivative(s: f64, kappa: f64, tau: f64) -> SpinSplit {
    SpinSplit {
        omega_l: Quaternion::pure(s * (1.0 + tau) / 2.0, 0.0, s * kappa / 2.0),
        omega_r: Quaternion::pure(s * (tau - 1.0) / 2.0, 0.0, s * kappa / 2.0),
    }
}

/// Split of an arbitrary skew-symmetric `4 x 4` matrix.
///
/// The six matrices `L(i), L(j), L(k), R(i), R(j), R(k)` are mutually
/// orthogonal with squared Frobenius norm 4, so the coefficients are inner
/// products. The skew part of `lambda` is reconstructed exactly.
pub fn split_so4(lambda: &Matrix4<f64>) -> SpinSplit {
    let coeff = |m: Matrix4<f64>| lambda.component_mul(&m).sum() / 4.0;
    let units = [Quaternion::I, Quaternion::J, Quaternion::K];
    let l = units.map(|u| coeff(left_mul_matrix(u)));
    let r = units.map(|u| -coeff(right_mul_matrix(u)));
    SpinSplit {
        omega_l: Quaternion::pure(l[0], l[1], l[2]),
        omega_r: Quaternion::pure(r[0], r[1], r[2]),
    }
}

/// Left and right parts sharing a parameter interval.
#[derive(Debug, Clone)]
pub struct PairCurve {
    pub left: Curve3,
    pub right: Curve3,
    /// Number of grid intervals on which conditions are checked.
    pub samples: usize,
}

impl PairCurve {
    pub fn new(left: Curve3, right: Curve3, samples: usize) -> Self {
        PairCurve { left, right, samples }
    }
}

/// Output of [`decompose`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pair: PairCurve,
    pub left: SampledCurve<3>,
    pub right: SampledCurve<3>,
    /// Spin lift of the Frenet frame, starting at `(1, 1)`.
    pub lift: Vec<SpinPair>,
    pub frames: FrameCurve<4>,
}

impl Decomposition {
    pub fn endpoint(&self) -> SpinPair {
        *self.lift.last().expect("non-empty grid")
    }
}

/// Splits a locally convex curve on `S3` with `F(0) = I` into its left and
/// right parts, sampled on `samples + 1` points.
pub fn decompose(gamma: &(impl Curve<4> + ?Sized), samples: usize) -> Result<Decomposition> {
    let check = local_convexity_check(gamma, samples);
    if !check.convex {
        return Err(Error::Convexity {
            t: check.t_min,
            det: check.min_normalized_det,
        });
    }
    let ts = linspace(0.0, 1.0, samples);
    let frames = frame_curve(gamma, &ts)?;
    let start = frames.frames[0].matrix();
    let offset = (start - Matrix4::identity()).amax();
    if offset > 1e-9 {
        return Err(Error::Precondition(format!(
            "Frenet frame at t = 0 differs from the identity by {offset:.3e}"
        )));
    }
    let lift = lift_path_spin4(&frames.frames, SpinPair::IDENTITY)?;
    let profile = frames.profile();
    let n = ts.len();
    let mut left_sub = Vec::with_capacity(n);
    let mut right_sub = Vec::with_capacity(n);
    for i in 0..n {
        let (s, k, tau) = (profile.speed[i], profile.kappa[i], profile.tau[i]);
        left_sub.push([s * k, s * (1.0 + tau)]);
        right_sub.push([s * k, s * (tau - 1.0)]);
    }
    let zl: Vec<_> = lift.iter().map(|p| p.zl).collect();
    let zr: Vec<_> = lift.iter().map(|p| p.zr).collect();
    let left = spin_curve(&ts, &zl, &left_sub)?;
    let right = spin_curve(&ts, &zr, &right_sub)?;
    Ok(Decomposition {
        pair: PairCurve::new(Arc::new(left.clone()), Arc::new(right.clone()), samples),
        left,
        right,
        lift,
        frames,
    })
}

/// The curve `z i conj(z)` on `S2`, whose Frenet frame is `Pi3(z)` and whose
/// log-derivative has subdiagonal `sub`.
fn spin_curve(ts: &[f64], zs: &[UnitQuaternion], sub: &[[f64; 2]]) -> Result<SampledCurve<3>> {
    let lambdas: Vec<Matrix3<f64>> = sub.iter().map(|s| jacobi_matrix::<3>(s)).collect();
    let (points, derivs): (Vec<_>, Vec<_>) = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            let (start, w) = stencil(ts, i, 5, 2);
            let diff = |order: usize| {
                w[order]
                    .iter()
                    .enumerate()
                    .fold(Matrix3::zeros(), |acc, (j, wj)| acc + lambdas[start + j] * *wj)
            };
            let g = *project_spin3(zs[i]).matrix();
            let v = derivative_vectors(&lambdas[i], &diff(1), &diff(2));
            (g.column(0).into_owned(), [g * v[1], g * v[2], g * v[3]])
        })
        .unzip();
    SampledCurve::with_derivatives(Space::S2, ts.to_vec(), points, derivs)
}

/// Grid summary of condition (L).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionLReport {
    /// Largest `| |gl'| - |gr'| |` relative to `max(1, |gl'|)`.
    pub max_speed_mismatch: f64,
    /// Smallest `kappa_l - |kappa_r|`.
    pub min_margin: f64,
    pub pass: bool,
}

struct PairSample {
    speed_l: f64,
    speed_r: f64,
    kappa_l: f64,
    kappa_r: f64,
}

fn pair_sample(pair: &PairCurve, t: f64) -> Result<PairSample> {
    Ok(PairSample {
        speed_l: pair.left.jet(t).speed(),
        speed_r: pair.right.jet(t).speed(),
        kappa_l: curvature_s2(&pair.left, t)?,
        kappa_r: curvature_s2(&pair.right, t)?,
    })
}

fn mismatch(p: &PairSample) -> f64 {
    (p.speed_l - p.speed_r).abs() / p.speed_l.max(1.0)
}

/// Speed mismatch and curvature margin of a pair on its grid.
pub fn condition_l_report(pair: &PairCurve) -> Result<ConditionLReport> {
    let samples: Vec<Result<PairSample>> = linspace(0.0, 1.0, pair.samples)
        .into_par_iter()
        .map(|t| pair_sample(pair, t))
        .collect();
    let mut report = ConditionLReport {
        max_speed_mismatch: 0.0,
        min_margin: f64::INFINITY,
        pass: false,
    };
    for p in samples {
        let p = p?;
        report.max_speed_mismatch = report.max_speed_mismatch.max(mismatch(&p));
        report.min_margin = report.min_margin.min(p.kappa_l - p.kappa_r.abs());
    }
    report.pass = report.max_speed_mismatch <= SPEED_MATCH_TOL && report.min_margin > CONDITION_L_MARGIN;
    Ok(report)
}

/// Output of [`compose`].
#[derive(Debug, Clone)]
pub struct Composition {
    pub curve: SampledCurve<4>,
    pub frames: FrameCurve<4>,
    /// Spin lift of the frame path, starting at `(1, 1)`.
    pub lift: Vec<SpinPair>,
}

impl Composition {
    pub fn endpoint(&self) -> SpinPair {
        *self.lift.last().expect("non-empty grid")
    }
}

/// Subdiagonal `(s, s kappa, s tau)` of the composed curve from the pair's
/// speed `c` and curvatures: `s = c (kl - kr) / 2`, `s kappa = c`,
/// `s tau = c (kl + kr) / 2`.
fn composed_subdiagonal(p: &PairSample) -> [f64; 3] {
    let c = 0.5 * (p.speed_l + p.speed_r);
    [c * (p.kappa_l - p.kappa_r) / 2.0, c, c * (p.kappa_l + p.kappa_r) / 2.0]
}

/// Builds the curve on `S3` whose left and right parts are `pair`, by
/// integrating its Jacobi matrix with `steps` RK4 steps.
pub fn compose(pair: &PairCurve, steps: usize) -> Result<Composition> {
    let grid = linspace(0.0, 1.0, pair.samples);
    let samples: Vec<Result<PairSample>> = grid.par_iter().map(|&t| pair_sample(pair, t)).collect();
    for (index, (p, &t)) in samples.into_iter().zip(&grid).enumerate() {
        let p = p?;
        let gap = mismatch(&p);
        if gap > SPEED_MATCH_TOL {
            return Err(Error::ConditionL {
                index,
                t,
                what: "speed mismatch",
                value: gap,
            });
        }
        let margin = p.kappa_l - p.kappa_r.abs();
        if !(margin > CONDITION_L_MARGIN) {
            return Err(Error::ConditionL {
                index,
                t,
                what: "curvature margin",
                value: margin,
            });
        }
    }
    let lambda = |t: f64| match pair_sample(pair, t) {
        Ok(p) => jacobi_matrix::<4>(&composed_subdiagonal(&p)),
        Err(_) => Matrix4::from_element(f64::NAN),
    };
    let out = integrate_jacobian(lambda, steps)?;
    let lift = lift_path_spin4(&out.frames.frames, SpinPair::IDENTITY)?;
    Ok(Composition {
        curve: out.curve,
        frames: out.frames,
        lift,
    })
}

/// Lifted endpoint of the Frenet frame path of a curve on `S2` with
/// `F(0) = I`, sampled on `samples + 1` points.
pub fn spin3_endpoint(curve: &(impl Curve<3> + ?Sized), samples: usize) -> Result<UnitQuaternion> {
    let fc = frame_curve(curve, &linspace(0.0, 1.0, samples))?;
    let lift = lift_path_spin3(&fc.frames, UnitQuaternion::ONE)?;
    Ok(*lift.last().expect("non-empty grid"))
}

/// Largest pointwise distance between two curves on a uniform grid.
pub fn sup_distance<const D: usize>(a: &(impl Curve<D> + ?Sized), b: &(impl Curve<D> + ?Sized), samples: usize) -> f64 {
    linspace(0.0, 1.0, samples)
        .into_iter()
        .map(|t| (a.point(t) - b.point(t)).norm())
        .fold(0.0, f64::max)
}

/// Speed and curvature fields `(c, kl, kr)` at `t`, for reporting.
pub fn pair_invariants(pair: &PairCurve, t: f64) -> Result<(f64, f64, f64)> {
    let p = pair_sample(pair, t)?;
    Ok((p.speed_l, p.kappa_l, p.kappa_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{circle_sigma, gamma1, iterate};
    use crate::quatspin::project_spin4;
    use std::f64::consts::{PI, TAU};

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn split_formula_reconstructs_jacobi_matrix() {
        for &(s, k, tau) in &[(1.0, 1.0, 1.0), (2.5, 0.3, -0.7), (0.1, 4.0, 2.0)] {
            let split = split_log_derivative(s, k, tau);
            let lambda = jacobi_matrix::<4>(&[s, s * k, s * tau]);
            assert!((split.reconstruct() - lambda).amax() < 1e-12);
            let generic = split_so4(&lambda);
            assert!(close(generic.omega_l, split.omega_l, 1e-12));
            assert!(close(generic.omega_r, split.omega_r, 1e-12));
        }
        let unit = split_log_derivative(1.0, 1.0, 1.0);
        assert!(close(unit.omega_l, Quaternion::pure(1.0, 0.0, 0.5), 1e-15));
        assert!(close(unit.omega_r, Quaternion::pure(0.0, 0.0, 0.5), 1e-15));
    }

    #[test]
    fn gamma1_split_speeds() {
        let r3 = 3f64.sqrt();
        for m in [1.0, 2.0, 5.0] {
            let split = split_so4(&gamma1(m).lambda());
            // The left factor turns at rate m pi, the right at m pi / 2.
            assert!((split.omega_l.norm() - m * PI).abs() < 1e-12);
            assert!((split.omega_r.norm() - m * PI / 2.0).abs() < 1e-12);
            assert!(close(
                split.omega_l,
                Quaternion::pure(m * PI * r3 / 2.0, 0.0, m * PI / 2.0),
                1e-12
            ));
        }
    }

    #[test]
    fn decompose_gamma1_gives_circles() {
        for m in [1.0, 2.0] {
            let d = decompose(&gamma1(m), 1024).unwrap();
            let left = iterate(circle_sigma(PI).unwrap(), m);
            let right = iterate(circle_sigma(TAU).unwrap(), m / 2.0);
            assert!(sup_distance(&d.left, &left, 1024) < 1e-9);
            assert!(sup_distance(&d.right, &right, 1024) < 1e-9);
            // Derivatives between the exact nodes.
            for t in [0.1, 0.333, 0.9] {
                assert!((d.left.jet(t).deriv(1) - left.jet(t).deriv(1)).norm() < 1e-5);
            }
            for i in [0, 200, 1024] {
                assert!((d.left.jet_at(i).deriv(2) - left.jet(d.left.ts()[i]).deriv(2)).norm() < 1e-6);
                assert!((d.right.jet_at(i).deriv(3) - right.jet(d.right.ts()[i]).deriv(3)).norm() < 1e-6);
            }
            let r = condition_l_report(&d.pair).unwrap();
            assert!(r.pass);
            assert!((r.min_margin - 3f64.sqrt()).abs() < 1e-6);
        }
    }

    #[test]
    fn endpoint_lifts() {
        let one = decompose(&gamma1(1.0), 256).unwrap().endpoint();
        assert!(close(one.zl.quaternion(), -Quaternion::ONE, 1e-6));
        assert!(close(one.zr.quaternion(), Quaternion::K, 1e-6));
        let two = decompose(&gamma1(2.0), 256).unwrap();
        let end = two.endpoint();
        assert!(close(end.zl.quaternion(), Quaternion::ONE, 1e-6));
        assert!(close(end.zr.quaternion(), -Quaternion::ONE, 1e-6));
        // Endpoint algebra: Pi4 of the lifted endpoint is the final frame.
        let last = two.frames.frames.last().unwrap();
        assert!((project_spin4(end).matrix() - last.matrix()).amax() < 1e-6);
        // Each part's own spin lift ends at the matching factor.
        let zl = spin3_endpoint(&two.left, 256).unwrap();
        let zr = spin3_endpoint(&two.right, 256).unwrap();
        assert!(close(zl.quaternion(), end.zl.quaternion(), 1e-6));
        assert!(close(zr.quaternion(), end.zr.quaternion(), 1e-6));
    }

    #[test]
    fn compose_circles_gives_gamma1() {
        let pair = PairCurve::new(
            Arc::new(iterate(circle_sigma(PI).unwrap(), 2.0)),
            Arc::new(circle_sigma(TAU).unwrap()),
            512,
        );
        let out = compose(&pair, 1024).unwrap();
        assert!(sup_distance(&out.curve, &gamma1(2.0), 1024) < 1e-6);
        let end = out.endpoint();
        assert!(close(end.zl.quaternion(), Quaternion::ONE, 1e-5));
        assert!(close(end.zr.quaternion(), -Quaternion::ONE, 1e-5));

        let pair = PairCurve::new(
            Arc::new(circle_sigma(PI).unwrap()),
            Arc::new(iterate(circle_sigma(TAU).unwrap(), 0.5)),
            512,
        );
        let end = compose(&pair, 1024).unwrap().endpoint();
        assert!(close(end.zl.quaternion(), -Quaternion::ONE, 1e-5));
        assert!(close(end.zr.quaternion(), Quaternion::K, 1e-5));
    }

    #[test]
    fn condition_l_failures() {
        let same = PairCurve::new(
            Arc::new(circle_sigma(PI).unwrap()),
            Arc::new(circle_sigma(PI).unwrap()),
            64,
        );
        let r = condition_l_report(&same).unwrap();
        assert!(!r.pass);
        assert!(r.max_speed_mismatch < 1e-12);
        assert!(r.min_margin.abs() < 1e-9);
        assert!(matches!(compose(&same, 64), Err(Error::ConditionL { index: 0, .. })));
        let slow = PairCurve::new(
            Arc::new(circle_sigma(PI).unwrap()),
            Arc::new(circle_sigma(TAU).unwrap()),
            64,
        );
        assert!(matches!(
            compose(&slow, 64),
            Err(Error::ConditionL {
                what: "speed mismatch",
                ..
            })
        ));
    }

    #[test]
    fn decompose_rejects_non_convex_input() {
        let mirror = crate::curves::LinearImage::new(
            gamma1(1.0),
            Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0)),
        );
        assert!(matches!(decompose(&mirror, 128), Err(Error::Convexity { .. })));
    }

    #[test]
    fn round_trip_through_compose() {
        let d = decompose(&gamma1(1.0), 1024).unwrap();
        let back = compose(&d.pair, 1024).unwrap();
        assert!(sup_distance(&back.curve, &gamma1(1.0), 1024) < 1e-5);
        let again = decompose(&back.curve, 1024).unwrap();
        assert!(sup_distance(&again.left, &d.left, 1024) < 1e-5);
        assert!(sup_distance(&again.right, &d.right, 1024) < 1e-5);
    }
}
