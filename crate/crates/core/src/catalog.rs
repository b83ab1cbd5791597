//! Explicit curve families: the circles `sigma_c` on `S2` and the curves
//! `gamma1^m` on `S3`, with closed forms and exact derivatives.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::{Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves::{AnyCurve, Curve, CurveJet, Iterate, Jet, Space};
use crate::error::{Error, Result};

/// The circle of length `c` on `S2` through `e1` with initial Frenet frame `I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigma {
    c: f64,
    rho: f64,
}

impl Sigma {
    pub fn length(&self) -> f64 {
        self.c
    }

    /// Angular radius, with `c = 2 pi sin(rho)`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Centre of the circle, `(cos rho, 0, sin rho)`.
    pub fn axis(&self) -> Vector3<f64> {
        Vector3::new(self.rho.cos(), 0.0, self.rho.sin())
    }

    /// Geodesic curvature `cot(rho)`.
    pub fn curvature(&self) -> f64 {
        self.rho.cos() / self.rho.sin()
    }
}

/// `sigma_c` for `0 < c <= 2 pi`.
pub fn circle_sigma(c: f64) -> Result<Sigma> {
    if !(c > 0.0 && c <= TAU) {
        return Err(Error::Range {
            what: "circle length c",
            value: c,
            expected: "0 < c <= 2 pi",
        });
    }
    // Snap to the great circle so that c = 2 pi yields exactly zero curvature.
    let ratio = (c / TAU).min(1.0);
    let rho = if ratio == 1.0 { PI / 2.0 } else { ratio.asin() };
    Ok(Sigma { c, rho })
}

impl Curve<3> for Sigma {
    fn jet(&self, t: f64) -> CurveJet<3> {
        let (sr, cr) = self.rho.sin_cos();
        let theta = Jet::affine(t, TAU, 0.0);
        let (s, c) = (theta.sin(), theta.cos());
        CurveJet::from_components([
            Jet::constant(cr * cr) + c * (sr * sr),
            s * sr,
            Jet::constant(cr * sr) - c * (sr * cr),
        ])
    }

    fn space(&self) -> Space {
        Space::S2
    }
}

/// `t -> curve(m t)`; `m` need not be an integer.
pub fn iterate<C>(curve: C, m: f64) -> Iterate<C> {
    Iterate::new(curve, m)
}

/// `gamma1^m(t) = (cos^3 a, sqrt3 sin a cos^2 a, sqrt3 sin^2 a cos a, sin^3 a)`
/// with `a = pi m t / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gamma1 {
    m: f64,
}

pub fn gamma1(m: f64) -> Gamma1 {
    Gamma1 { m }
}

impl Gamma1 {
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Constant speed `m pi sqrt3 / 2`.
    pub fn speed(&self) -> f64 {
        self.m * PI * 3f64.sqrt() / 2.0
    }

    /// The constant log-derivative of the Frenet frame.
    pub fn lambda(&self) -> Matrix4<f64> {
        gamma1_lambda(self.m)
    }
}

/// `(pi/2) * J` where `J` is tridiagonal skew with subdiagonal `(m sqrt3, 2m, m sqrt3)`.
pub fn gamma1_lambda(m: f64) -> Matrix4<f64> {
    let a = PI / 2.0 * m * 3f64.sqrt();
    let b = PI / 2.0 * 2.0 * m;
    Matrix4::new(
        0.0, -a, 0.0, 0.0, //
        a, 0.0, -b, 0.0, //
        0.0, b, 0.0, -a, //
        0.0, 0.0, a, 0.0,
    )
}

impl Curve<4> for Gamma1 {
    fn jet(&self, t: f64) -> CurveJet<4> {
        let a = Jet::affine(t, PI * self.m / 2.0, 0.0);
        let (s, c) = (a.sin(), a.cos());
        let r3 = 3f64.sqrt();
        CurveJet::from_components([c * c * c, s * c * c * r3, s * s * c * r3, s * s * s])
    }

    fn space(&self) -> Space {
        Space::S3
    }
}

/// A catalog curve as named in curve documents and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum CatalogEntry {
    Sigma {
        c: f64,
        #[serde(default = "one")]
        m: f64,
    },
    Gamma1 {
        #[serde(default = "one")]
        m: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl CatalogEntry {
    pub fn space(&self) -> Space {
        match self {
            CatalogEntry::Sigma { .. } => Space::S2,
            CatalogEntry::Gamma1 { .. } => Space::S3,
        }
    }

    pub fn build(&self) -> Result<AnyCurve> {
        match *self {
            CatalogEntry::Sigma { c, m } => {
                check_iteration(m)?;
                let sigma = circle_sigma(c)?;
                Ok(AnyCurve::Dim3(if m == 1.0 {
                    Arc::new(sigma)
                } else {
                    Arc::new(iterate(sigma, m))
                }))
            }
            CatalogEntry::Gamma1 { m } => {
                check_iteration(m)?;
                Ok(AnyCurve::Dim4(Arc::new(gamma1(m))))
            }
        }
    }
}

fn check_iteration(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::Range {
            what: "iteration count m",
            value: m,
            expected: "m > 0",
        })
    }
}
