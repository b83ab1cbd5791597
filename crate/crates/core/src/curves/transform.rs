use std::fmt;
use std::sync::Arc;

use nalgebra::SMatrix;

use super::{Curve, CurveJet, CurveSpec, Jet, Space};
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre5, linspace, locate};

/// A scalar function given by its jet, e.g. a reparametrisation or a weight.
pub type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// `t -> inner(m t)`.
#[derive(Debug, Clone)]
pub struct Iterate<C> {
    inner: C,
    m: f64,
}

impl<C> Iterate<C> {
    pub fn new(inner: C, m: f64) -> Self {
        Iterate { inner, m }
    }

    pub fn count(&self) -> f64 {
        self.m
    }
}

impl<const D: usize, C: Curve<D>> Curve<D> for Iterate<C> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        self.inner.jet(self.m * t).compose(Jet::affine(t, self.m, 0.0))
    }
    fn space(&self) -> Space {
        self.inner.space()
    }
}

/// `t -> inner(t) / |inner(t)|`.
#[derive(Debug, Clone)]
pub struct Normalized<const D: usize> {
    inner: CurveSpec<D>,
}

impl<const D: usize> Normalized<D> {
    pub(super) fn new(inner: CurveSpec<D>) -> Self {
        Normalized { inner }
    }
}

impl<const D: usize> Curve<D> for Normalized<D> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        let j = self.inner.jet(t);
        let norm = j.dot(&j).sqrt();
        j.scale_by(norm.recip())
    }
    fn space(&self) -> Space {
        Space::for_dim(D, true)
    }
}

/// `t -> (1, x2/x1, ..., xD/x1)`.
#[derive(Debug, Clone)]
pub struct CentralProjection<const D: usize> {
    inner: CurveSpec<D>,
}

impl<const D: usize> CentralProjection<D> {
    pub(super) fn new(inner: CurveSpec<D>) -> Self {
        CentralProjection { inner }
    }
}

impl<const D: usize> Curve<D> for CentralProjection<D> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        let j = self.inner.jet(t);
        j.scale_by(j.component(0).recip())
    }
    fn space(&self) -> Space {
        Space::for_dim(D, false)
    }
}

/// `t -> g(t) inner(t)`.
pub struct Scaled<C> {
    inner: C,
    weight: JetFn,
}

impl<C> Scaled<C> {
    pub fn new(inner: C, weight: JetFn) -> Self {
        Scaled { inner, weight }
    }
}

impl<C: fmt::Debug> fmt::Debug for Scaled<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scaled")
            .field("inner", &self.inner)
            .finish_non_exhaustive()
    }
}

impl<const D: usize, C: Curve<D>> Curve<D> for Scaled<C> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        self.inner.jet(t).scale_by((self.weight)(t))
    }
    fn space(&self) -> Space {
        Space::for_dim(D, false)
    }
}

/// `u -> inner(phi(u))` for a positive reparametrisation `phi`.
pub struct Reparametrized<C> {
    inner: C,
    phi: JetFn,
}

impl<C> Reparametrized<C> {
    pub fn new(inner: C, phi: JetFn) -> Self {
        Reparametrized { inner, phi }
    }

    /// Restriction to `[a, b]`, rescaled onto `[0, 1]`.
    pub fn restrict(inner: C, a: f64, b: f64) -> Self {
        Reparametrized::new(inner, Arc::new(move |u| Jet::affine(u, b - a, a)))
    }
}

impl<C: fmt::Debug> fmt::Debug for Reparametrized<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reparametrized")
            .field("inner", &self.inner)
            .finish_non_exhaustive()
    }
}

impl<const D: usize, C: Curve<D>> Curve<D> for Reparametrized<C> {
    fn jet(&self, u: f64) -> CurveJet<D> {
        let phi = (self.phi)(u);
        self.inner.jet(phi.value()).compose(phi)
    }
    fn space(&self) -> Space {
        self.inner.space()
    }
}

/// `t -> M inner(t)` for a fixed matrix `M`.
#[derive(Debug, Clone)]
pub struct LinearImage<C, const D: usize> {
    inner: C,
    matrix: SMatrix<f64, D, D>,
    space: Space,
}

impl<C: Curve<D>, const D: usize> LinearImage<C, D> {
    /// The image stays on the sphere when `matrix` is orthogonal.
    pub fn new(inner: C, matrix: SMatrix<f64, D, D>) -> Self {
        let orthogonal = (matrix.transpose() * matrix - SMatrix::<f64, D, D>::identity()).amax() < 1e-12;
        let space = Space::for_dim(D, inner.space().is_sphere() && orthogonal);
        LinearImage { inner, matrix, space }
    }
}

impl<const D: usize, C: Curve<D>> Curve<D> for LinearImage<C, D> {
    fn jet(&self, t: f64) -> CurveJet<D> {
        let j = self.inner.jet(t);
        CurveJet(j.0.map(|v| self.matrix * v))
    }
    fn space(&self) -> Space {
        self.space
    }
}

const ARC_TABLE: usize = 2048;

/// Arc-length-proportional reparametrisation of a curve on `[0, 1]`.
///
/// The arc-length function is tabulated with composite Gauss-Legendre
/// quadrature and inverted by safeguarded Newton iteration.
#[derive(Debug, Clone)]
pub struct ArcLength<const D: usize> {
    inner: CurveSpec<D>,
    grid: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<const D: usize> ArcLength<D> {
    pub(super) fn new(inner: CurveSpec<D>) -> Result<Self> {
        let grid = linspace(0.0, 1.0, ARC_TABLE);
        for &t in &grid {
            let speed = inner.jet(t).speed();
            if !(speed >= 1e-12) {
                return Err(Error::Immersion { t, speed });
            }
        }
        let mut cumulative = Vec::with_capacity(grid.len());
        cumulative.push(0.0);
        for w in grid.windows(2) {
            let piece = gauss_legendre5(w[0], w[1], |t| inner.jet(t).speed());
            cumulative.push(cumulative.last().copied().unwrap_or(0.0) + piece);
        }
        Ok(ArcLength {
            inner,
            grid,
            cumulative,
        })
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Original parameter whose arc length from 0 is `s`.
    fn invert(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length());
        let i = locate(&self.cumulative, s);
        let (mut lo, mut hi) = (self.grid[i], self.grid[i + 1]);
        let base = self.cumulative[i];
        let frac = (s - base) / (self.cumulative[i + 1] - base);
        let mut t = lo + frac * (hi - lo);
        for _ in 0..50 {
            let f = base + gauss_legendre5(self.grid[i], t, |x| self.inner.jet(x).speed()) - s;
            if f.abs() < 1e-15 * self.length().max(1.0) {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = t - f / self.inner.jet(t).speed();
            t = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        }
        t
    }
}

impl<const D: usize> Curve<D> for ArcLength<D> {
    fn jet(&self, u: f64) -> CurveJet<D> {
        let length = self.length();
        let t = self.invert(u * length);
        let j = self.inner.jet(t);
        // Speed and its first two derivatives from |x'|^2 = <x', x'>.
        let velocity = CurveJet([j.0[1], j.0[2], j.0[3], nalgebra::SVector::zeros()]);
        let v = velocity.dot(&velocity).sqrt().0;
        let (v0, v1, v2) = (v[0], v[1], v[2]);
        let phi = Jet([
            t,
            length / v0,
            -length * length * v1 / v0.powi(3),
            -length.powi(3) * (v2 / v0.powi(4) - 3.0 * v1 * v1 / v0.powi(5)),
        ]);
        j.compose(phi)
    }
    fn space(&self) -> Space {
        self.inner.space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::curves::{central_projection, normalize_to_sphere, reparametrize_constant_speed, sample};
    use std::f64::consts::PI;

    fn quadratic(inner: crate::curves::Curve3) -> crate::curves::Curve3 {
        // phi(u) = (u + u^2) / 2, strictly increasing on [0, 1].
        Arc::new(Reparametrized::new(
            inner,
            Arc::new(|u| {
                let x = Jet::variable(u);
                (x + x * x).scale(0.5)
            }),
        ))
    }

    #[test]
    fn constant_speed_restored() {
        let sigma: crate::curves::Curve3 = Arc::new(catalog::circle_sigma(PI).unwrap());
        let warped = quadratic(sigma.clone());
        let restored = reparametrize_constant_speed(warped.clone()).unwrap();
        assert!((restored.length() - PI).abs() < 1e-9);
        for i in 0..=200 {
            let u = i as f64 / 200.0;
            assert!((restored.jet(u).speed() - PI).abs() < 1e-5, "u = {u}");
            // Second derivative of arc-length reparametrised curve is normal to the
            // velocity, i.e. the speed is stationary.
            let j = restored.jet(u);
            assert!(j.deriv(1).dot(&j.deriv(2)).abs() < 1e-6);
        }
        let already = reparametrize_constant_speed(sigma).unwrap();
        for i in 0..=50 {
            assert!((already.jet(i as f64 / 50.0).speed() - PI).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_speed_gamma1_unchanged() {
        let g: crate::curves::Curve4 = Arc::new(catalog::gamma1(2.0));
        let r = reparametrize_constant_speed(g.clone()).unwrap();
        let s = 2.0 * PI * 3f64.sqrt() / 2.0;
        for i in 0..=40 {
            let u = i as f64 / 40.0;
            assert!((r.jet(u).speed() - s).abs() < 1e-9);
            assert!((r.point(u) - g.point(u)).norm() < 1e-9);
        }
    }

    #[test]
    fn normalisation_undoes_positive_scaling() {
        let sigma: crate::curves::Curve3 = Arc::new(catalog::circle_sigma(PI).unwrap());
        let doubled: crate::curves::Curve3 = Arc::new(Scaled::new(sigma.clone(), Arc::new(|_| Jet::constant(2.0))));
        let back = normalize_to_sphere(doubled).unwrap();
        let same = normalize_to_sphere(sigma.clone()).unwrap();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            for k in 0..4 {
                assert!((back.jet(t).deriv(k) - sigma.jet(t).deriv(k)).norm() < 1e-12);
                assert!((same.jet(t).deriv(k) - sigma.jet(t).deriv(k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_of_gamma1_is_a_moment_curve_in_tan() {
        let g: crate::curves::Curve4 = Arc::new(catalog::gamma1(1.0));
        let upper = 0.99;
        let restricted: crate::curves::Curve4 = Arc::new(Reparametrized::restrict(g, 0.0, upper));
        let p = central_projection(restricted).unwrap();
        let r3 = 3f64.sqrt();
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            let tan = (PI / 2.0 * upper * u).tan();
            let expected = nalgebra::Vector4::new(1.0, r3 * tan, r3 * tan * tan, tan.powi(3));
            let got = p.point(u);
            assert!((got - expected).norm() < 1e-9 * (1.0 + expected.norm()), "u = {u}");
        }
    }

    #[test]
    fn projection_leaves_affine_chart_curves_alone() {
        let g: crate::curves::Curve4 = Arc::new(catalog::gamma1(1.0));
        let restricted: crate::curves::Curve4 = Arc::new(Reparametrized::restrict(g, 0.0, 0.5));
        let once: crate::curves::Curve4 = Arc::new(central_projection(restricted).unwrap());
        let twice = central_projection(once.clone()).unwrap();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            assert!((twice.jet(t).deriv(2) - once.jet(t).deriv(2)).norm() < 1e-12);
        }
    }

    #[test]
    fn moment_curve_lift_normalised_stays_locally_convex() {
        // (1, sqrt3 x, sqrt3 x^2, x^3) for x in [0, 2].
        #[derive(Debug)]
        struct Moment;
        impl Curve<4> for Moment {
            fn jet(&self, t: f64) -> CurveJet<4> {
                let x = Jet::affine(t, 2.0, 0.0);
                let r3 = 3f64.sqrt();
                CurveJet::from_components([Jet::constant(1.0), x * r3, x * x * r3, x * x * x])
            }
            fn space(&self) -> Space {
                Space::R4
            }
        }
        let m: crate::curves::Curve4 = Arc::new(Moment);
        let n = normalize_to_sphere(m.clone()).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!(crate::curves::derivative_determinant(&n, t) > 0.0);
            assert!((n.point(t).norm() - 1.0).abs() < 1e-12);
        }
        let s = sample(&n, 16).unwrap();
        assert_eq!(s.space(), Space::S3);
    }
}
