//! Convexity of curves on `S3`: hyperplane intersections, non-convexity
//! witnesses, the moment-curve certificate and the top-cell monitor.
//!
//! A curve is convex when no hyperplane through the origin meets it more
//! than three times, counting multiplicity.

mod bruhat;
mod certificate;
mod intersect;
mod monitor;
mod witness;

use serde::Serialize;

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::frenet::frame_curve_uniform;

pub use bruhat::{
    bruhat_cell_of, bruhat_cell_with_margin, top_cell_factorize, top_cell_minors, top_permutation, SignedPermutation,
    TopCellFactorization,
};
pub use certificate::{moment_curve_convexity_proof, MomentCertificate};
pub use intersect::{
    count_intersections, count_intersections_on_grid, Hit, Hyperplane, IntersectionReport, INTERSECTION_GRID,
    INTERSECTION_TOL,
};
pub use monitor::{convexity_monitor, CellStatus, MonitorReport, MonitorSample, BOUNDARY_TOL, PATTERN_TOL};
pub use witness::{find_nonconvexity_witness, Witness, WitnessOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvexCertified,
    NonconvexWitness,
    Inconclusive,
}

/// Summary of the monitor without the per-sample trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorSummary {
    pub pass: bool,
    pub in_top_cell: bool,
    pub sign_pattern: bool,
    pub h_increasing: bool,
    pub boundary_samples: usize,
    pub first_failure: Option<f64>,
}

impl From<&MonitorReport> for MonitorSummary {
    fn from(r: &MonitorReport) -> Self {
        MonitorSummary {
            pass: r.pass,
            in_top_cell: r.in_top_cell,
            sign_pattern: r.sign_pattern,
            h_increasing: r.h_increasing,
            boundary_samples: r.samples.iter().filter(|s| s.status == CellStatus::Boundary).count(),
            first_failure: r.first_failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub certificate: Option<MomentCertificate>,
    /// Why no certificate could be built, when none was.
    pub certificate_error: Option<String>,
    pub monitor: MonitorSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityOptions {
    /// Intervals of the grids used by the monitor and the certificate.
    pub samples: usize,
    pub witness: WitnessOptions,
}

impl Default for ConvexityOptions {
    fn default() -> Self {
        ConvexityOptions {
            samples: crate::curves::VERIFICATION_GRID,
            witness: WitnessOptions::default(),
        }
    }
}

/// Runs the witness search, the certificate and the monitor on a locally
/// convex curve on `S3`.
///
/// A witness settles non-convexity. Convexity is reported as certified only
/// when the certificate holds and the monitor passes; otherwise the result
/// is inconclusive.
pub fn analyze_convexity(curve: &(impl Curve<4> + ?Sized), opts: &ConvexityOptions) -> Result<ConvexityReport> {
    let frames = frame_curve_uniform(curve, opts.samples)?;
    if let Some(i) = frames.remainders.iter().position(|r| !(r[(3, 3)] > 0.0)) {
        return Err(Error::Convexity {
            t: frames.ts[i],
            det: (0..4).map(|k| frames.remainders[i][(k, k)]).product(),
        });
    }
    let monitor = convexity_monitor(&frames);
    let witness = find_nonconvexity_witness(curve, &opts.witness);
    let (certificate, certificate_error) = match moment_curve_convexity_proof(curve, opts.samples, opts.witness.seed) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(format!("{}: {e}", e.name()))),
    };
    let verdict = if witness.is_some() {
        Verdict::NonconvexWitness
    } else if monitor.pass && certificate.as_ref().is_some_and(|c| c.certified) {
        Verdict::ConvexCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvexityReport {
        verdict,
        witness,
        certificate,
        certificate_error,
        monitor: MonitorSummary::from(&monitor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gamma1;

    #[test]
    fn verdicts_for_gamma1() {
        let opts = ConvexityOptions {
            witness: WitnessOptions {
                budget: 500,
                ..WitnessOptions::default()
            },
            ..ConvexityOptions::default()
        };
        assert_eq!(
            analyze_convexity(&gamma1(1.0), &opts).unwrap().verdict,
            Verdict::ConvexCertified
        );
        assert_eq!(
            analyze_convexity(&gamma1(2.0), &opts).unwrap().verdict,
            Verdict::ConvexCertified
        );
        let r = analyze_convexity(&gamma1(5.0), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::NonconvexWitness);
        assert!(r.certificate_error.unwrap().starts_with("ChartError"));
        let json = serde_json::to_value(analyze_convexity(&gamma1(5.0), &opts).unwrap()).unwrap();
        assert_eq!(json["verdict"], "nonconvex-witness");
    }
}
