use nalgebra::SVector;
use serde::Serialize;

use crate::curves::{Curve, Jet};
use crate::error::{Error, Result};
use crate::numeric::{linspace, locate};

/// Default tolerance for zeros and multiplicities.
pub const INTERSECTION_TOL: f64 = 1e-9;
/// Default grid used to bracket zeros.
pub const INTERSECTION_GRID: usize = 1024;
/// Parameters closer than this to 0 or 1 count as endpoints.
const ENDPOINT_EPS: f64 = 1e-9;

/// The hyperplane through the origin with the given unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperplane<const D: usize> {
    #[serde(serialize_with = "serialize_vector")]
    normal: SVector<f64, D>,
}

fn serialize_vector<S: serde::Serializer, const D: usize>(v: &SVector<f64, D>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

impl<const D: usize> Hyperplane<D> {
    pub fn new(normal: SVector<f64, D>) -> Result<Self> {
        let norm = normal.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::Precondition("hyperplane normal must be nonzero".into()));
        }
        Ok(Hyperplane { normal: normal / norm })
    }

    pub fn normal(&self) -> &SVector<f64, D> {
        &self.normal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hit {
    pub t: f64,
    pub multiplicity: usize,
}

/// Zeros of `t -> <h, x(t)>` in the open interval `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub hits: Vec<Hit>,
    /// Sum of multiplicities.
    pub total: usize,
}

impl IntersectionReport {
    /// Number of hits of multiplicity one.
    pub fn transversal(&self) -> usize {
        self.hits.iter().filter(|h| h.multiplicity == 1).count()
    }
}

/// Intersections with multiplicity on the default bracketing grid.
pub fn count_intersections<const D: usize>(
    curve: &(impl Curve<D> + ?Sized),
    h: &Hyperplane<D>,
    tol: f64,
) -> Result<IntersectionReport> {
    count_intersections_on_grid(curve, h, tol, INTERSECTION_GRID)
}

/// Intersections with multiplicity, bracketing zeros on `grid + 1` points.
///
/// Sign changes are refined by bisection. Tangential zeros are found at
/// local minima of `|f|` by locating the nearby critical point of `f`; they
/// count only when `|f|` there is below `tol`. The multiplicity is the first
/// `k` with `|f^(k)| >= tol max(1, |x'|)^k`.
pub fn count_intersections_on_grid<const D: usize>(
    curve: &(impl Curve<D> + ?Sized),
    h: &Hyperplane<D>,
    tol: f64,
    grid: usize,
) -> Result<IntersectionReport> {
    let ts = linspace(0.0, 1.0, grid.max(2));
    let f = |t: f64| -> Jet { curve.jet(t).dot_fixed(h.normal()) };
    let values: Vec<Jet> = ts.iter().map(|&t| f(t)).collect();

    let max_f = values.iter().map(|j| j.0[0].abs()).fold(0.0, f64::max);
    let max_df = values.iter().map(|j| j.0[1].abs()).fold(0.0, f64::max);
    if max_f <= tol && max_df <= tol {
        return Err(Error::Resolution {
            t: 0.0,
            reason: "curve lies in the hyperplane",
        });
    }

    let mut roots = Vec::new();
    for i in 0..ts.len() - 1 {
        let (a, b) = (values[i].0[0], values[i + 1].0[0]);
        if a * b < 0.0 {
            roots.push(bisect(|t| f(t).0[0], ts[i], ts[i + 1], a));
        } else if a == 0.0 && i > 0 && values[i - 1].0[0] * b < 0.0 {
            roots.push(ts[i]);
        }
    }
    for i in 1..ts.len() - 1 {
        let (prev, here, next) = (values[i - 1].0[0], values[i].0[0], values[i + 1].0[0]);
        let local_min = here.abs() <= prev.abs() && here.abs() <= next.abs();
        if !local_min || prev * next < 0.0 {
            continue;
        }
        let t = critical_point(&f, ts[i - 1], ts[i + 1]).unwrap_or(ts[i]);
        if f(t).0[0].abs() < tol {
            roots.push(t);
        }
    }

    roots.retain(|&t| t > ENDPOINT_EPS && t < 1.0 - ENDPOINT_EPS);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() < 1e-7);
    for pair in roots.windows(2) {
        if locate(&ts, pair[0]) == locate(&ts, pair[1]) {
            return Err(Error::Resolution {
                t: pair[0],
                reason: "two zeros inside one grid interval",
            });
        }
    }

    let mut hits = Vec::with_capacity(roots.len());
    for t in roots {
        let jet = curve.jet(t);
        let speed = jet.speed().max(1.0);
        let value = jet.dot_fixed(h.normal());
        let multiplicity = (1..=3)
            .find(|&k| value.0[k].abs() >= tol * speed.powi(k as i32))
            .ok_or(Error::Resolution {
                t,
                reason: "derivatives vanish to order 3",
            })?;
        hits.push(Hit { t, multiplicity });
    }
    let total = hits.iter().map(|h| h.multiplicity).sum();
    Ok(IntersectionReport { hits, total })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zero of `f'` in `[a, b]` when `f'` changes sign there.
fn critical_point(f: &impl Fn(f64) -> Jet, a: f64, b: f64) -> Option<f64> {
    let (da, db) = (f(a).0[1], f(b).0[1]);
    if da == 0.0 {
        return Some(a);
    }
    if da * db > 0.0 {
        return None;
    }
    Some(bisect(|t| f(t).0[1], a, b, da))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{circle_sigma, gamma1};
    use nalgebra::{Vector3, Vector4};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn gamma1_five_hyperplane_through_fifths() {
        let h = Hyperplane::new(Vector4::new(0.0, 1.0, 1.0, 0.0)).unwrap();
        let r = count_intersections(&gamma1(5.0), &h, INTERSECTION_TOL).unwrap();
        let ts: Vec<f64> = r.hits.iter().map(|h| h.t).collect();
        let expected = [0.2, 0.3, 0.4, 0.6, 0.7, 0.8];
        assert_eq!(ts.len(), expected.len(), "{ts:?}");
        for (t, e) in ts.iter().zip(expected) {
            assert!((t - e).abs() < 1e-9);
        }
        assert_eq!(r.transversal(), 6);
        assert!(r.total >= 4);
    }

    #[test]
    fn tangential_hits_have_multiplicity_two() {
        // sin(2a) cos(a) has double zeros where cos(a) = 0.
        let h = Hyperplane::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let r = count_intersections(&gamma1(5.0), &h, INTERSECTION_TOL).unwrap();
        let doubles: Vec<f64> = r.hits.iter().filter(|h| h.multiplicity == 2).map(|h| h.t).collect();
        assert_eq!(doubles.len(), 2, "{r:?}");
        assert!((doubles[0] - 0.2).abs() < 1e-6 && (doubles[1] - 0.6).abs() < 1e-6);
        assert_eq!(r.total, 6);
    }

    #[test]
    fn small_circle_meets_plane_twice() {
        let sigma = circle_sigma(PI).unwrap();
        // Great circle through the interior of the cap: normal orthogonal-ish to the axis.
        let h = Hyperplane::new(Vector3::new(0.1, 1.0, 0.2)).unwrap();
        let r = count_intersections(&sigma, &h, INTERSECTION_TOL).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.transversal(), 2);
    }

    #[test]
    fn curve_inside_plane_is_unresolvable() {
        let meridian = circle_sigma(TAU).unwrap();
        let h = Hyperplane::new(Vector3::z()).unwrap();
        assert!(matches!(
            count_intersections(&meridian, &h, INTERSECTION_TOL),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn endpoints_are_excluded() {
        // gamma1^2 ends at -e1 and starts at e1; x4 = sin^3 vanishes only at the ends.
        let h = Hyperplane::new(Vector4::w()).unwrap();
        let r = count_intersections(&gamma1(2.0), &h, INTERSECTION_TOL).unwrap();
        assert!(r.hits.is_empty(), "{r:?}");
        // x2 = sqrt3 sin cos^2 has a double zero at t = 1/2.
        let h = Hyperplane::new(Vector4::y()).unwrap();
        let r = count_intersections(&gamma1(2.0), &h, INTERSECTION_TOL).unwrap();
        assert_eq!(r.hits.len(), 1);
        assert_eq!(r.hits[0].multiplicity, 2);
        assert!(Hyperplane::new(Vector4::<f64>::zeros()).is_err());
    }
}
