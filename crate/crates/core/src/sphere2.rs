//! Closed curves on `S2`: hemispheres, stereographic projection and
//! rotation numbers.
//!
//! The rotation number of a closed curve inside a closed hemisphere is
//! `rot(x) = -rot(eta)`, where `eta` is the stereographic projection of `x`
//! from the antipode of the distinguished hemisphere. The plane is oriented
//! as seen from the projection pole, so that a circle turning positively
//! about its centre has rotation number `+1`.

use std::fmt::Write as _;

use nalgebra::{Matrix3, Vector2, Vector3};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{Curve, Jet, VERIFICATION_GRID};
use crate::decomp::decompose;
use crate::error::{Error, Result};
use crate::numeric::{linspace, signed_angle};
use crate::quatspin::{SpinPair, UnitQuaternion};

/// Half-width of the band around zero margin classified as borderline.
pub const BORDERLINE_BAND: f64 = 1e-6;
/// Smallest admissible distance between the curve and the projection pole.
pub const POLE_TOL: f64 = 1e-6;
/// Largest distance from an integer accepted for a total turning / 2 pi.
pub const ROTATION_RESIDUAL: f64 = 0.05;
/// Default number of directions sampled for the distinguished hemisphere.
pub const FEASIBLE_DIRECTIONS: usize = 100_000;
/// Closure tolerance of planar closed curves.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Closure tolerance of sampled spherical curves before projection; the
/// projected polygon is then closed exactly.
pub const SAMPLED_CLOSURE_TOL: f64 = 1e-6;
/// Endpoint tolerance of the spin frame in [`necessary_convexity_condition`].
pub const ENDPOINT_TOL: f64 = 1e-5;

const STARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hemisphericity {
    /// Inside an open hemisphere.
    Hemispherical,
    /// Inside a closed hemisphere but no open one.
    Borderline,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HemisphereReport {
    pub classification: Hemisphericity,
    /// Centre of the best hemisphere found.
    #[serde(serialize_with = "ser_vec3")]
    pub witness: Vector3<f64>,
    /// `min_t <witness, x(t)>` over the grid.
    pub margin: f64,
}

fn ser_vec3<S: serde::Serializer>(v: &Vector3<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

fn ser_vec2s<S: serde::Serializer>(v: &[Vector2<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| [p.x, p.y]))
}

fn grid_points(curve: &(impl Curve<3> + ?Sized), n: usize) -> Vec<Vector3<f64>> {
    linspace(0.0, 1.0, n.max(4))
        .into_iter()
        .map(|t| curve.point(t))
        .collect()
}

fn margin_of(h: &Vector3<f64>, points: &[Vector3<f64>]) -> f64 {
    points.iter().map(|p| h.dot(p)).fold(f64::INFINITY, f64::min)
}

/// Best hemisphere for `curve` sampled on `n + 1` points.
pub fn hemisphere_classify(curve: &(impl Curve<3> + ?Sized), n: usize) -> HemisphereReport {
    hemisphere_classify_points(&grid_points(curve, n))
}

/// Maximises `m(h) = min_i <h, p_i>` over unit `h`.
///
/// Multi-start ascent of a smoothed minimum with increasing sharpness, run
/// in parallel from fixed starts and reduced by value (ties to the lowest
/// start). The winner is polished on its active set: points within `eps`
/// of the minimum should lie on a plane `<h, x> = m`, so `h` is taken as the
/// normal of the best-fit affine plane, for a range of `eps`.
pub fn hemisphere_classify_points(points: &[Vector3<f64>]) -> HemisphereReport {
    let centroid = points.iter().sum::<Vector3<f64>>();
    let mut starts = fibonacci_directions(STARTS);
    if centroid.norm() > 1e-12 {
        starts.insert(0, centroid.normalize());
    }
    let results: Vec<(Vector3<f64>, f64)> = starts
        .par_iter()
        .map(|h0| {
            let h = soft_min_ascent(*h0, points);
            (h, margin_of(&h, points))
        })
        .collect();
    let (mut h, mut m) = results
        .iter()
        .copied()
        .reduce(|best, r| if r.1 > best.1 { r } else { best })
        .expect("at least one start");
    for eps in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8] {
        if let Some(h2) = polish(&h, m, eps, points) {
            let m2 = margin_of(&h2, points);
            if m2 > m {
                h = h2;
                m = m2;
            }
        }
    }
    let classification = if m > BORDERLINE_BAND {
        Hemisphericity::Hemispherical
    } else if m >= -BORDERLINE_BAND {
        Hemisphericity::Borderline
    } else {
        Hemisphericity::Neither
    };
    HemisphereReport {
        classification,
        witness: h,
        margin: m,
    }
}

fn soft_min(h: &Vector3<f64>, points: &[Vector3<f64>], beta: f64) -> (f64, Vector3<f64>) {
    let m = margin_of(h, points);
    let mut z = 0.0;
    let mut g = Vector3::zeros();
    for p in points {
        let w = (-beta * (h.dot(p) - m)).exp();
        z += w;
        g += p * w;
    }
    (m - z.ln() / beta, g / z)
}

fn soft_min_ascent(mut h: Vector3<f64>, points: &[Vector3<f64>]) -> Vector3<f64> {
    for beta in [4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0, 16384.0, 65536.0] {
        let mut step = 0.5;
        let (mut f, mut g) = soft_min(&h, points, beta);
        for _ in 0..60 {
            let tangent = g - h * g.dot(&h);
            if tangent.norm() < 1e-14 {
                break;
            }
            let mut accepted = false;
            while step > 1e-12 {
                let candidate = (h + tangent * step).normalize();
                let (f2, g2) = soft_min(&candidate, points, beta);
                if f2 > f {
                    h = candidate;
                    f = f2;
                    g = g2;
                    step *= 1.5;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
    }
    h
}

fn polish(h: &Vector3<f64>, m: f64, eps: f64, points: &[Vector3<f64>]) -> Option<Vector3<f64>> {
    let active: Vec<Vector3<f64>> = points.iter().copied().filter(|p| h.dot(p) <= m + eps).collect();
    let centre = active.iter().sum::<Vector3<f64>>() / active.len() as f64;
    let scatter = active.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = p - centre;
        acc + d * d.transpose()
    });
    let eig = scatter.symmetric_eigen();
    let largest = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    // Null directions of the active differences; the optimum is the
    // projection of any active point onto them.
    let null: Vec<Vector3<f64>> = (0..3)
        .filter(|&k| eig.eigenvalues[k] <= 1e-12 * largest.max(1.0) || eig.eigenvalues[k] <= 1e-20)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    if null.is_empty() {
        return None;
    }
    let projected: Vector3<f64> = null.iter().map(|v| v * v.dot(&centre)).sum();
    let candidate = if projected.norm() > 1e-12 {
        projected
    } else {
        // Active points on a great circle: take the null direction nearest `h`.
        null.iter().map(|v| v * v.dot(h)).sum()
    };
    (candidate.norm() > 1e-12).then(|| candidate.normalize())
}

/// `n` roughly uniform directions on `S2` (Fibonacci lattice).
pub fn fibonacci_directions(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Directions `h` with `<h, x(t)> >= 0` at every grid point, among the
/// `directions` Fibonacci directions.
pub fn feasible_directions(points: &[Vector3<f64>], directions: usize) -> Vec<Vector3<f64>> {
    fibonacci_directions(directions)
        .into_par_iter()
        .filter(|h| points.iter().all(|p| h.dot(p) >= 0.0))
        .collect()
}

/// Centre of the distinguished hemisphere: the normalised mean of the
/// sampled feasible directions.
///
/// When the feasible set is too thin to be hit by the sample (a borderline
/// curve has a feasible set of measure zero) the witness of
/// [`hemisphere_classify`] is returned instead. `EmptyFeasibleError` when no
/// closed hemisphere contains the curve.
pub fn distinguished_hemisphere(curve: &(impl Curve<3> + ?Sized), n: usize) -> Result<Vector3<f64>> {
    distinguished_hemisphere_points(&grid_points(curve, n), FEASIBLE_DIRECTIONS)
}

pub fn distinguished_hemisphere_points(points: &[Vector3<f64>], directions: usize) -> Result<Vector3<f64>> {
    let report = hemisphere_classify_points(points);
    if report.classification == Hemisphericity::Neither {
        return Err(Error::EmptyFeasible { margin: report.margin });
    }
    let feasible = feasible_directions(points, directions);
    let mean = feasible.iter().sum::<Vector3<f64>>();
    if feasible.is_empty() || mean.norm() < 1e-9 * feasible.len() as f64 {
        return Ok(report.witness);
    }
    Ok(mean.normalize())
}

/// A closed immersed curve in the plane with its velocity along a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarClosedCurve {
    pub ts: Vec<f64>,
    #[serde(serialize_with = "ser_vec2s")]
    pub points: Vec<Vector2<f64>>,
    #[serde(serialize_with = "ser_vec2s")]
    pub velocities: Vec<Vector2<f64>>,
}

impl PlanarClosedCurve {
    /// Checks closure within [`CLOSURE_TOL`] and finiteness.
    pub fn new(ts: Vec<f64>, points: Vec<Vector2<f64>>, velocities: Vec<Vector2<f64>>) -> Result<Self> {
        if ts.len() != points.len() || ts.len() != velocities.len() || ts.len() < 4 {
            return Err(Error::Precondition(
                "planar curve needs matching grids of at least 4 samples".into(),
            ));
        }
        let gap = (points[0] - points[points.len() - 1]).norm();
        if !(gap <= CLOSURE_TOL) {
            return Err(Error::Precondition(format!(
                "planar curve is not closed (gap {gap:.3e})"
            )));
        }
        Ok(PlanarClosedCurve { ts, points, velocities })
    }
}

/// A proper rotation with `h` as its third row.
fn frame_with_pole(h: &Vector3<f64>) -> Matrix3<f64> {
    let h = h.normalize();
    let seed = if h.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let p = (seed - h * h.dot(&seed)).normalize();
    let q = h.cross(&p);
    Matrix3::from_rows(&[p.transpose(), q.transpose(), h.transpose()])
}

/// Stereographic projection from `-h` onto the plane through the origin
/// orthogonal to `h`, on `n + 1` grid points.
///
/// In coordinates `(x, y, z)` with `z = <h, .>`, a point maps to
/// `(x, -y) / (1 + z)`: the plane is viewed from the pole `-h`.
/// `PoleError` if the curve comes within [`POLE_TOL`] of `-h`;
/// `PreconditionError` if it does not close within [`SAMPLED_CLOSURE_TOL`].
pub fn stereographic_project(
    curve: &(impl Curve<3> + ?Sized),
    h: &Vector3<f64>,
    n: usize,
) -> Result<PlanarClosedCurve> {
    let rot = frame_with_pole(h);
    let ts = linspace(0.0, 1.0, n.max(4));
    let mut points = Vec::with_capacity(ts.len());
    let mut velocities = Vec::with_capacity(ts.len());
    for &t in &ts {
        let jet = curve.jet(t);
        let distance = (jet.point() + h.normalize()).norm();
        if !(distance > POLE_TOL) {
            return Err(Error::Pole { t, distance });
        }
        let c = jet.components();
        let coord = |k: usize| -> Jet { c[0] * rot[(k, 0)] + c[1] * rot[(k, 1)] + c[2] * rot[(k, 2)] };
        let denom = (coord(2) + Jet::constant(1.0)).recip();
        let u = coord(0) * denom;
        let v = -(coord(1) * denom);
        points.push(Vector2::new(u.0[0], v.0[0]));
        velocities.push(Vector2::new(u.0[1], v.0[1]));
    }
    let gap = (curve.point(1.0) - curve.point(0.0)).norm();
    if !(gap <= SAMPLED_CLOSURE_TOL) {
        return Err(Error::Precondition(format!("curve is not closed (gap {gap:.3e})")));
    }
    let last = points.len() - 1;
    points[last] = points[0];
    PlanarClosedCurve::new(ts, points, velocities)
}

/// Degree of the unit tangent of a planar closed curve.
///
/// Turning is accumulated between consecutive grid velocities.
/// `ImmersionError` on a vanishing velocity, `DensityError` when a single
/// step turns by more than a quarter turn or the total is not within
/// [`ROTATION_RESIDUAL`] of a whole number of turns.
pub fn rotation_number(pc: &PlanarClosedCurve) -> Result<i64> {
    Ok(turning(pc)?.0)
}

/// Rotation number together with the per-step turning angles.
pub fn turning(pc: &PlanarClosedCurve) -> Result<(i64, Vec<f64>)> {
    let scale = pc.velocities.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (t, v) in pc.ts.iter().zip(&pc.velocities) {
        if !(v.norm() > 1e-12 * scale.max(1.0)) {
            return Err(Error::Immersion { t: *t, speed: v.norm() });
        }
    }
    let mut steps = Vec::with_capacity(pc.velocities.len() - 1);
    for (i, w) in pc.velocities.windows(2).enumerate() {
        let angle = signed_angle([w[0].x, w[0].y], [w[1].x, w[1].y]);
        if angle.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Density {
                index: i,
                angle: angle.abs(),
                limit: std::f64::consts::FRAC_PI_2,
            });
        }
        steps.push(angle);
    }
    let turns = steps.iter().sum::<f64>() / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > ROTATION_RESIDUAL {
        return Err(Error::Density {
            index: steps.len(),
            angle: (turns - rounded).abs(),
            limit: ROTATION_RESIDUAL,
        });
    }
    Ok((rounded as i64, steps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereRotation {
    pub hemisphere: HemisphereReport,
    /// Centre of the distinguished hemisphere.
    #[serde(serialize_with = "ser_vec3")]
    pub center: Vector3<f64>,
    /// Rotation number of the projected curve.
    pub planar: i64,
    /// `rot = -planar`.
    pub rot: i64,
}

/// Hemisphere classification and rotation number of a closed curve on `S2`.
pub fn spherical_rotation_number(curve: &(impl Curve<3> + ?Sized), n: usize) -> Result<SphereRotation> {
    let points = grid_points(curve, n);
    let hemisphere = hemisphere_classify_points(&points);
    let center = distinguished_hemisphere_points(&points, FEASIBLE_DIRECTIONS)?;
    rotation_about(curve, hemisphere, center, n)
}

/// Rotation number using the given hemisphere centre instead of the
/// distinguished one.
pub fn rotation_about(
    curve: &(impl Curve<3> + ?Sized),
    hemisphere: HemisphereReport,
    center: Vector3<f64>,
    n: usize,
) -> Result<SphereRotation> {
    let planar = rotation_number(&stereographic_project(curve, &center, n.max(VERIFICATION_GRID))?)?;
    Ok(SphereRotation {
        hemisphere,
        center,
        planar,
        rot: -planar,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessaryConditionReport {
    pub left: SphereRotation,
    pub pass: bool,
}

/// Necessary condition for convexity of a curve on `S3` whose lifted frame
/// ends at `(1, -1)`: its left part must be hemispherical with rotation
/// number 2. A failure proves non-convexity; a pass proves nothing.
///
/// `Precondition` error for any other endpoint; decomposition and
/// classification errors are propagated.
pub fn necessary_convexity_condition(
    gamma: &(impl Curve<4> + ?Sized),
    samples: usize,
) -> Result<NecessaryConditionReport> {
    let d = decompose(gamma, samples)?;
    let end = d.endpoint();
    let target = SpinPair::new(UnitQuaternion::ONE, -UnitQuaternion::ONE);
    let off = (end.zl.quaternion() - target.zl.quaternion())
        .norm()
        .max((end.zr.quaternion() - target.zr.quaternion()).norm());
    if !(off <= ENDPOINT_TOL) {
        return Err(Error::Precondition(format!(
            "lifted endpoint {end:?} is not (1, -1) (off by {off:.3e})"
        )));
    }
    let left = match spherical_rotation_number(&d.left, samples) {
        Ok(r) => r,
        Err(Error::EmptyFeasible { margin }) => {
            return Ok(NecessaryConditionReport {
                left: SphereRotation {
                    hemisphere: hemisphere_classify(&d.left, samples),
                    center: Vector3::zeros(),
                    planar: 0,
                    rot: 0,
                },
                pass: margin > BORDERLINE_BAND,
            });
        }
        Err(e) => return Err(e),
    };
    let pass = left.hemisphere.classification == Hemisphericity::Hemispherical && left.rot == 2;
    Ok(NecessaryConditionReport { left, pass })
}

/// SVG drawing of a planar curve, with the accumulated turning (in turns)
/// marked at eight evenly spaced samples.
pub fn planar_svg(pc: &PlanarClosedCurve, title: &str) -> Result<String> {
    let (rot, steps) = turning(pc)?;
    let (mut lo, mut hi) = (Vector2::repeat(f64::INFINITY), Vector2::repeat(f64::NEG_INFINITY));
    for p in &pc.points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let span = (hi - lo).max().max(1e-9);
    let pad = 0.08 * span;
    let size = 480.0;
    let scale = size / (span + 2.0 * pad);
    let map = |p: &Vector2<f64>| ((p.x - lo.x + pad) * scale, (hi.y - p.y + pad) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    let _ = write!(
        svg,
        r#"<polyline fill="none" stroke="black" stroke-width="1.5" points=""#
    );
    for p in &pc.points {
        let (x, y) = map(p);
        let _ = write!(svg, "{x:.3},{y:.3} ");
    }
    let _ = writeln!(svg, r#""/>"#);
    let mut acc = 0.0;
    let marks = 8;
    let every = (steps.len() / marks).max(1);
    for (i, p) in pc.points.iter().enumerate() {
        if i > 0 {
            acc += steps[i - 1];
        }
        if i % every == 0 && i < pc.points.len() - 1 {
            let (x, y) = map(p);
            let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="steelblue"/>"#);
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-size="10" fill="steelblue">{:.3}</text>"#,
                x + 4.0,
                y - 4.0,
                acc / std::f64::consts::TAU
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="8" y="{:.0}" font-size="12">planar rotation number {rot}</text>"#,
        size - 8.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{circle_sigma, gamma1, iterate};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn small_circle_hemisphere() {
        let s = circle_sigma(PI).unwrap();
        let r = hemisphere_classify(&s, 512);
        assert_eq!(r.classification, Hemisphericity::Hemispherical);
        assert!(
            (r.witness - Vector3::new(3f64.sqrt() / 2.0, 0.0, 0.5)).norm() < 1e-9,
            "{:?}",
            r.witness
        );
        assert!((r.margin - 3f64.sqrt() / 2.0).abs() < 1e-9);
        let r2 = hemisphere_classify(&iterate(s, 2.0), 512);
        assert_eq!(r2.classification, Hemisphericity::Hemispherical);
    }

    #[test]
    fn great_circle_is_borderline() {
        let r = hemisphere_classify(&circle_sigma(TAU).unwrap(), 512);
        assert_eq!(r.classification, Hemisphericity::Borderline);
        assert!(r.margin.abs() <= BORDERLINE_BAND);
        assert!((r.witness.z.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn three_great_circles_are_neither() {
        // Points on three orthogonal great circles.
        let mut pts = Vec::new();
        for k in 0..90 {
            let a = TAU * k as f64 / 90.0;
            let (s, c) = a.sin_cos();
            pts.push(Vector3::new(c, s, 0.0));
            pts.push(Vector3::new(0.0, c, s));
            pts.push(Vector3::new(s, 0.0, c));
        }
        let r = hemisphere_classify_points(&pts);
        assert_eq!(r.classification, Hemisphericity::Neither);
        assert!(matches!(
            distinguished_hemisphere_points(&pts, 1000),
            Err(Error::EmptyFeasible { .. })
        ));
    }

    #[test]
    fn distinguished_hemisphere_on_axis() {
        let s = circle_sigma(PI).unwrap();
        let axis = s.axis();
        for curve_m in [1.0, 2.0] {
            let h = distinguished_hemisphere(&iterate(s, curve_m), 256).unwrap();
            assert!(h.dot(&axis).clamp(-1.0, 1.0).acos() < 2f64.to_radians());
        }
        let g = distinguished_hemisphere(&circle_sigma(TAU).unwrap(), 256).unwrap();
        assert!((g.z.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equator_projects_to_unit_circle() {
        let eq = circle_sigma(TAU).unwrap();
        let pc = stereographic_project(&eq, &Vector3::z(), 256).unwrap();
        for p in &pc.points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rotation_number(&pc).unwrap().abs(), 1);
    }

    #[test]
    fn small_circle_projects_to_round_circle() {
        let s = circle_sigma(PI).unwrap();
        let pc = stereographic_project(&s, &s.axis(), 512).unwrap();
        // The closing point repeats the first one.
        let open = &pc.points[..pc.points.len() - 1];
        let centre = open.iter().sum::<Vector2<f64>>() / open.len() as f64;
        let radii: Vec<f64> = pc.points.iter().map(|p| (p - centre).norm()).collect();
        let (lo, hi) = radii
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi - lo < 1e-6, "roundness residual {}", hi - lo);
    }

    #[test]
    fn pole_error() {
        let s = circle_sigma(PI).unwrap();
        let through = -s.point(0.3);
        assert!(matches!(
            stereographic_project(&s, &through, 100),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn rotation_numbers_of_circles() {
        let s = circle_sigma(PI).unwrap();
        assert_eq!(spherical_rotation_number(&s, 512).unwrap().rot, 1);
        assert_eq!(spherical_rotation_number(&iterate(s, 2.0), 512).unwrap().rot, 2);
        assert_eq!(spherical_rotation_number(&iterate(s, 6.0), 512).unwrap().rot, 6);
    }

    #[test]
    fn figure_eight_has_rotation_zero() {
        let ts = linspace(0.0, 1.0, 400);
        let pts = ts
            .iter()
            .map(|&t| Vector2::new((TAU * t).sin(), (2.0 * TAU * t).sin() / 2.0))
            .collect();
        let vel = ts
            .iter()
            .map(|&t| Vector2::new(TAU * (TAU * t).cos(), TAU * (2.0 * TAU * t).cos()))
            .collect();
        let pc = PlanarClosedCurve::new(ts, pts, vel).unwrap();
        assert_eq!(rotation_number(&pc).unwrap(), 0);
        assert!(planar_svg(&pc, "eight").unwrap().contains("planar rotation number 0"));
    }

    #[test]
    fn rotation_independent_of_feasible_choice() {
        let s = iterate(circle_sigma(PI).unwrap(), 2.0);
        let pts = grid_points(&s, 256);
        let hemi = hemisphere_classify_points(&pts);
        let feasible = feasible_directions(&pts, 20_000);
        assert!(feasible.len() > 10);
        for h in feasible.iter().step_by(feasible.len() / 10).take(10) {
            assert_eq!(rotation_about(&s, hemi, *h, 512).unwrap().rot, 2);
        }
    }

    #[test]
    fn margin_is_lipschitz() {
        let s = circle_sigma(PI).unwrap();
        let base = hemisphere_classify(&s, 512).margin;
        let pts: Vec<Vector3<f64>> = grid_points(&s, 512)
            .into_iter()
            .enumerate()
            .map(|(i, p)| p + Vector3::new(1.0, -1.0, 1.0).normalize() * 1e-3 * ((i % 7) as f64 / 6.0))
            .collect();
        let moved = hemisphere_classify_points(&pts).margin;
        assert!((moved - base).abs() <= 1e-3 + 1e-9);
    }

    #[test]
    fn necessary_condition_on_gamma1() {
        let r = necessary_convexity_condition(&gamma1(2.0), 512).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.left.rot, 2);
        let r6 = necessary_convexity_condition(&gamma1(6.0), 512).unwrap();
        assert!(!r6.pass);
        assert_eq!(r6.left.rot, 6);
        assert!(matches!(
            necessary_convexity_condition(&gamma1(1.0), 512),
            Err(Error::Precondition(_))
        ));
    }
}
