use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::intersect::{count_intersections, Hyperplane, INTERSECTION_TOL};
use crate::curves::{derivative_matrix, Curve};
use crate::error::{Error, Result};
use crate::frenet::frenet_frame;
use crate::numeric::linspace;

/// Parameters whose Frenet frames are tried as chart bases, in order.
const CHART_CENTERS: [f64; 9] = [0.5, 0.25, 0.75, 0.0, 1.0, 0.125, 0.375, 0.625, 0.875];
/// Hyperplanes through random triples of sample points used as a cross-check.
const TRIPLE_TESTS: usize = 200;

/// Evidence that a curve on `S3` is convex.
///
/// In the basis `(e1, ..., e4) = F(t0)` the curve is written as
/// `y = F(t0)^T x`. On the chart `y1 > 0` the central projection
/// `(1, y2/y1, y3/y1, y4/y1)` is an extended complete Chebyshev system when
/// the leading principal minors of the derivative matrix
/// `(y, y', y'', y''')` are all positive; every nonzero linear combination
/// then has at most three zeros counted with multiplicity, which is
/// convexity. The moment curve `(1, x, x^2, x^3)` is the model case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCertificate {
    /// Parameter whose frame gives the chart basis.
    pub center: f64,
    /// Smallest `<x(t0), x(t)>` over interior samples.
    pub min_chart: f64,
    /// Smallest leading minors over interior samples, each divided by the
    /// matching power of the speed.
    pub min_minors: [f64; 4],
    /// Most intersections found on hyperplanes through sample triples.
    pub max_triple_hits: usize,
    pub certified: bool,
}

/// Builds a [`MomentCertificate`] on the uniform grid with `n + 1` points.
/// Only interior samples are checked, so curves whose chart degenerates at
/// the endpoints still qualify. `ChartError` when no tried basis puts the
/// open curve in the chart.
pub fn moment_curve_convexity_proof(
    curve: &(impl Curve<4> + ?Sized),
    n: usize,
    seed: u64,
) -> Result<MomentCertificate> {
    let ts = linspace(0.0, 1.0, n.max(2));
    let interior = &ts[1..ts.len() - 1];
    let mut first_error = None;
    for &t0 in &CHART_CENTERS {
        let Ok(frame) = frenet_frame(curve, t0) else { continue };
        let basis = frame.frame.matrix().transpose();
        let center = basis.row(0).transpose();
        let bad = interior
            .iter()
            .map(|&t| (t, center.dot(&curve.point(t))))
            .find(|&(_, v)| !(v > 0.0));
        match bad {
            Some((t, value)) => {
                first_error.get_or_insert(Error::Chart { t, value });
            }
            None => return Ok(certify(curve, interior, t0, &basis, seed)),
        }
    }
    Err(first_error.unwrap_or(Error::Chart {
        t: 0.5,
        value: f64::NAN,
    }))
}

fn certify(
    curve: &(impl Curve<4> + ?Sized),
    interior: &[f64],
    t0: f64,
    basis: &Matrix4<f64>,
    seed: u64,
) -> MomentCertificate {
    let stats: Vec<(f64, [f64; 4])> = interior
        .par_iter()
        .map(|&t| {
            let jet = curve.jet(t);
            let v = jet.speed();
            let m = basis * derivative_matrix(&jet);
            let minors = [
                m[(0, 0)],
                m.fixed_view::<2, 2>(0, 0).determinant() / v,
                m.fixed_view::<3, 3>(0, 0).determinant() / v.powi(3),
                m.determinant() / v.powi(6),
            ];
            (minors[0], minors)
        })
        .collect();
    let min_chart = stats.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let min_minors = std::array::from_fn(|k| stats.iter().map(|s| s.1[k]).fold(f64::INFINITY, f64::min));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<[f64; 3]> = (0..TRIPLE_TESTS)
        .map(|_| {
            let mut idx = [0usize; 3];
            loop {
                for i in &mut idx {
                    *i = rng.gen_range(0..interior.len());
                }
                if idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2] {
                    break;
                }
            }
            idx.map(|i| interior[i])
        })
        .collect();
    let max_triple_hits = triples
        .par_iter()
        .map(|tri| {
            let m = Matrix4::from_rows(&[
                curve.point(tri[0]).transpose(),
                curve.point(tri[1]).transpose(),
                curve.point(tri[2]).transpose(),
                Vector4::zeros().transpose(),
            ]);
            let svd = m.svd(false, true);
            let v_t = svd.v_t.expect("requested right singular vectors");
            let k = svd.singular_values.imin();
            Hyperplane::new(v_t.row(k).transpose())
                .and_then(|h| count_intersections(curve, &h, INTERSECTION_TOL))
                .map(|r| r.total)
                .unwrap_or(usize::MAX)
        })
        .max()
        .unwrap_or(0);

    MomentCertificate {
        center: t0,
        min_chart,
        min_minors,
        max_triple_hits,
        certified: min_minors.iter().all(|&m| m > 0.0) && max_triple_hits <= 3,
    }
}
