use nalgebra::Matrix4;
use serde::Serialize;

use super::bruhat::{factorize_at, top_cell_minors};
use crate::frenet::FrameCurve;

/// Leading minors within this distance of zero mark a frame as on the cell boundary.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Entries of `L^-1 L'` off the subdiagonal, relative to the largest
/// subdiagonal entry, above which the sign pattern counts as violated.
pub const PATTERN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    TopCell,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonitorSample {
    pub t: f64,
    pub status: CellStatus,
    pub min_minor: f64,
    /// `l21 + l43`, when the frame is in the top cell.
    pub h: Option<f64>,
    /// Smallest subdiagonal entry of `L^-1 L'`.
    pub min_subdiagonal: Option<f64>,
    /// Largest relative entry of `L^-1 L'` off the subdiagonal.
    pub off_pattern: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorReport {
    pub samples: Vec<MonitorSample>,
    /// No interior frame lies outside the top cell.
    pub in_top_cell: bool,
    pub sign_pattern: bool,
    pub h_increasing: bool,
    pub pass: bool,
    /// First interior parameter at which a check failed.
    pub first_failure: Option<f64>,
}

/// Follows the frames of a curve on `S3` through the top Bruhat cell.
///
/// At each interior sample the frame is factored as `P L U`. Differentiating
/// `P^T F = L U` with `F' = F Lambda` gives
/// `L^-1 L' + U' U^-1 = U Lambda U^-1`, so `L^-1 L'` is the strictly lower part
/// of `U Lambda U^-1`. For a locally convex curve it has a positive
/// subdiagonal and zeros elsewhere, and `h = l21 + l43` increases.
/// Frames whose leading minors are within [`BOUNDARY_TOL`] of zero are
/// flagged as boundary and skipped by the other checks.
pub fn convexity_monitor(fc: &FrameCurve<4>) -> MonitorReport {
    let profile = fc.profile();
    let mut samples = Vec::with_capacity(fc.len().saturating_sub(2));
    let mut first_failure = None;
    let fail = |t: f64, first: &mut Option<f64>| {
        if first.is_none() {
            *first = Some(t);
        }
    };
    let (mut in_top_cell, mut sign_pattern, mut h_increasing) = (true, true, true);
    let mut last_h: Option<f64> = None;

    for i in 1..fc.len().saturating_sub(1) {
        let t = fc.ts[i];
        let q = *fc.frames[i].matrix();
        let min_minor = top_cell_minors(&q).into_iter().fold(f64::INFINITY, f64::min);
        let status = if min_minor > BOUNDARY_TOL {
            CellStatus::TopCell
        } else if min_minor >= -BOUNDARY_TOL {
            CellStatus::Boundary
        } else {
            CellStatus::Outside
        };
        let mut sample = MonitorSample {
            t,
            status,
            min_minor,
            h: None,
            min_subdiagonal: None,
            off_pattern: None,
        };
        match status {
            CellStatus::Outside => {
                in_top_cell = false;
                fail(t, &mut first_failure);
            }
            CellStatus::Boundary => {}
            CellStatus::TopCell => match factorize_at(&q, t) {
                Ok(f) => {
                    let lambda: Matrix4<f64> = profile.lambda(i);
                    let u_inv = f.u.try_inverse().unwrap_or_else(Matrix4::zeros);
                    let k = f.u * lambda * u_inv;
                    let sub = [k[(1, 0)], k[(2, 1)], k[(3, 2)]];
                    let min_sub = sub.iter().copied().fold(f64::INFINITY, f64::min);
                    let max_sub = sub.iter().copied().fold(0.0, f64::max);
                    let off = [(2, 0), (3, 0), (3, 1)]
                        .iter()
                        .map(|&(r, c)| k[(r, c)].abs())
                        .fold(0.0, f64::max)
                        / max_sub.max(f64::MIN_POSITIVE);
                    if !(min_sub > 0.0) || off > PATTERN_TOL {
                        sign_pattern = false;
                        fail(t, &mut first_failure);
                    }
                    let h = f.l[(1, 0)] + f.l[(3, 2)];
                    if let Some(prev) = last_h {
                        if !(h > prev) {
                            h_increasing = false;
                            fail(t, &mut first_failure);
                        }
                    }
                    last_h = Some(h);
                    sample.h = Some(h);
                    sample.min_subdiagonal = Some(min_sub);
                    sample.off_pattern = Some(off);
                }
                Err(_) => {
                    in_top_cell = false;
                    fail(t, &mut first_failure);
                }
            },
        }
        samples.push(sample);
    }
    let any_classified = samples.iter().any(|s| s.status == CellStatus::TopCell);
    MonitorReport {
        pass: in_top_cell && sign_pattern && h_increasing && any_classified,
        samples,
        in_top_cell,
        sign_pattern,
        h_increasing,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gamma1;
    use crate::frenet::frame_curve_uniform;

    #[test]
    fn convex_gamma1_passes() {
        for m in [1.0, 2.0] {
            let fc = frame_curve_uniform(&gamma1(m), 512).unwrap();
            let r = convexity_monitor(&fc);
            assert!(r.pass, "m = {m}: first failure {:?}", r.first_failure);
            assert_eq!(r.samples.len(), 511);
        }
    }

    #[test]
    fn gamma1_five_leaves_the_top_cell() {
        let fc = frame_curve_uniform(&gamma1(5.0), 512).unwrap();
        let r = convexity_monitor(&fc);
        assert!(!r.pass);
        let t = r.first_failure.unwrap();
        assert!(t > 0.0 && t < 1.0);
    }
}
