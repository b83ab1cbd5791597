//! Curves on `S2`/`S3` and in the ambient spaces `R3`/`R4`.
//!
//! A curve is anything that can report its position and first three
//! derivatives on the parameter interval `[0, 1]` (see [`Curve`]). Closed
//! forms do so analytically through [`Jet`] arithmetic; [`SampledCurve`]
//! interpolates a grid and falls back to finite differences when no
//! derivative data was supplied.

mod jet;
mod sampled;
mod transform;

use std::fmt;
use std::sync::Arc;

use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linspace;

pub use jet::{CurveJet, Jet};
pub use sampled::SampledCurve;
pub use transform::{ArcLength, CentralProjection, Iterate, JetFn, LinearImage, Normalized, Reparametrized, Scaled};

/// Default number of intervals of the grids on which "for all t" conditions
/// are checked. Every such check is a sampled guarantee, not a proof.
pub const VERIFICATION_GRID: usize = 512;
/// Residency tolerance for curves that claim to live on the unit sphere.
pub const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    S2,
    S3,
    R3,
    R4,
}

impl Space {
    pub fn is_sphere(self) -> bool {
        matches!(self, Space::S2 | Space::S3)
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            Space::S2 | Space::R3 => 3,
            Space::S3 | Space::R4 => 4,
        }
    }

    /// The sphere or ambient space of dimension `dim` (3 or 4).
    pub fn for_dim(dim: usize, sphere: bool) -> Space {
        match (dim, sphere) {
            (3, true) => Space::S2,
            (3, false) => Space::R3,
            (_, true) => Space::S3,
            (_, false) => Space::R4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    ClosedForm,
    Samples,
}

/// A parametrised curve `[0, 1] -> R^D`.
pub trait Curve<const D: usize>: Send + Sync + fmt::Debug {
    /// Position and derivatives of orders 1..=3 at `t`.
    fn jet(&self, t: f64) -> CurveJet<D>;

    fn space(&self) -> Space;

    fn kind(&self) -> CurveKind {
        CurveKind::ClosedForm
    }

    fn point(&self, t: f64) -> SVector<f64, D> {
        self.jet(t).point()
    }
}

/// Shared handle on a curve of any concrete type.
pub type CurveSpec<const D: usize> = Arc<dyn Curve<D>>;

impl<const D: usize, C: Curve<D> + ?Sized> Curve<D> for Arc<C> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        (**self).jet(t)
    }
    fn space(&self) -> Space {
        (**self).space()
    }
    fn kind(&self) -> CurveKind {
        (**self).kind()
    }
}

impl<const D: usize, C: Curve<D> + ?Sized> Curve<D> for &C {
    fn jet(&self, t: f64) -> CurveJet<D> {
        (**self).jet(t)
    }
    fn space(&self) -> Space {
        (**self).space()
    }
    fn kind(&self) -> CurveKind {
        (**self).kind()
    }
}

/// A curve on `S2` or in `R3`.
pub type Curve3 = CurveSpec<3>;
/// A curve on `S3` or in `R4`.
pub type Curve4 = CurveSpec<4>;

/// Either dimension, as read from a curve document.
#[derive(Debug, Clone)]
pub enum AnyCurve {
    Dim3(Curve3),
    Dim4(Curve4),
}

impl AnyCurve {
    pub fn space(&self) -> Space {
        match self {
            AnyCurve::Dim3(c) => c.space(),
            AnyCurve::Dim4(c) => c.space(),
        }
    }
}

/// Uniform sample of `curve` with `n + 1` points (endpoints included) and
/// derivatives copied from the curve's jets.
pub fn sample<const D: usize>(curve: &(impl Curve<D> + ?Sized), n: usize) -> Result<SampledCurve<D>> {
    if n < 4 {
        return Err(Error::Range {
            what: "sample count",
            value: n as f64,
            expected: ">= 4",
        });
    }
    let ts = linspace(0.0, 1.0, n);
    let jets: Vec<_> = ts.iter().map(|&t| curve.jet(t)).collect();
    let points = jets.iter().map(|j| j.point()).collect();
    let derivs = jets.iter().map(|j| [j.deriv(1), j.deriv(2), j.deriv(3)]).collect();
    SampledCurve::with_derivatives(curve.space(), ts, points, derivs)
}

/// Derivatives of orders `1..=order` at `t`.
pub fn derivatives<const D: usize>(
    curve: &(impl Curve<D> + ?Sized),
    t: f64,
    order: usize,
) -> Result<Vec<SVector<f64, D>>> {
    if order > 3 {
        return Err(Error::Order { order });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range {
            what: "parameter",
            value: t,
            expected: "[0, 1]",
        });
    }
    let jet = curve.jet(t);
    Ok((1..=order).map(|k| jet.deriv(k)).collect())
}

/// Radial projection `t -> curve(t)/|curve(t)|` onto the unit sphere.
pub fn normalize_to_sphere<const D: usize>(curve: CurveSpec<D>) -> Result<Normalized<D>> {
    for t in linspace(0.0, 1.0, VERIFICATION_GRID) {
        let norm = curve.point(t).norm();
        if !(norm >= 1e-12) {
            return Err(Error::ZeroVector { t, norm });
        }
    }
    Ok(Normalized::new(curve))
}

/// `t -> (1, x2/x1, ..., xD/x1)`, defined where the first coordinate is positive.
pub fn central_projection<const D: usize>(curve: CurveSpec<D>) -> Result<CentralProjection<D>> {
    for t in linspace(0.0, 1.0, VERIFICATION_GRID) {
        let x1 = curve.point(t)[0];
        if !(x1 > 1e-9) {
            return Err(Error::Chart { t, value: x1 });
        }
    }
    Ok(CentralProjection::new(curve))
}

/// Positive reparametrisation proportional to arc length.
pub fn reparametrize_constant_speed<const D: usize>(curve: CurveSpec<D>) -> Result<ArcLength<D>> {
    ArcLength::new(curve)
}

/// Largest deviation `| |x(t)| - 1 |` over a uniform grid.
pub fn sphere_residual<const D: usize>(curve: &(impl Curve<D> + ?Sized), n: usize) -> f64 {
    linspace(0.0, 1.0, n)
        .into_iter()
        .map(|t| (curve.point(t).norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Determinant of `(x, x', ..., x^(D-1))` at `t`.
pub fn derivative_determinant<const D: usize>(curve: &(impl Curve<D> + ?Sized), t: f64) -> f64 {
    let jet = curve.jet(t);
    crate::numeric::determinant(&derivative_matrix(&jet))
}

/// The square matrix `(x, x', ..., x^(D-1))` with the derivatives as columns.
pub fn derivative_matrix<const D: usize>(jet: &CurveJet<D>) -> nalgebra::SMatrix<f64, D, D> {
    nalgebra::SMatrix::<f64, D, D>::from_fn(|r, c| jet.0[c][r])
}
