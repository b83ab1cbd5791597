//! Truncated derivative jets: a scalar function together with its first
//! three derivatives at a point, with the arithmetic needed to push closed
//! forms through products, quotients, square roots and trigonometry.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::SVector;

/// `[f, f', f'', f''']` at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// The identity function `t -> t` evaluated at `t`.
    pub fn variable(t: f64) -> Self {
        Jet([t, 1.0, 0.0, 0.0])
    }

    /// Affine function `t -> slope * t + offset` evaluated at `t`.
    pub fn affine(t: f64, slope: f64, offset: f64) -> Self {
        Jet([slope * t + offset, slope, 0.0, 0.0])
    }

    pub fn value(self) -> f64 {
        self.0[0]
    }

    pub fn sin(self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let (s, c) = a0.sin_cos();
        Jet([
            s,
            c * a1,
            -s * a1 * a1 + c * a2,
            -c * a1 * a1 * a1 - 3.0 * s * a1 * a2 + c * a3,
        ])
    }

    pub fn cos(self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let (s, c) = a0.sin_cos();
        Jet([
            c,
            -s * a1,
            -c * a1 * a1 - s * a2,
            s * a1 * a1 * a1 - 3.0 * c * a1 * a2 - s * a3,
        ])
    }

    pub fn sqrt(self) -> Self {
        let [f0, f1, f2, f3] = self.0;
        let h0 = f0.sqrt();
        let h1 = f1 / (2.0 * h0);
        let h2 = (f2 - 2.0 * h1 * h1) / (2.0 * h0);
        let h3 = (f3 - 6.0 * h1 * h2) / (2.0 * h0);
        Jet([h0, h1, h2, h3])
    }

    pub fn recip(self) -> Self {
        Jet::constant(1.0) / self
    }

    pub fn scale(self, s: f64) -> Self {
        Jet(self.0.map(|x| x * s))
    }

    /// `f(phi(u))` given the jet of `f` at `phi(u)` and the jet of `phi` at `u`.
    pub fn compose(self, phi: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [_, p1, p2, p3] = phi.0;
        Jet([
            f0,
            f1 * p1,
            f2 * p1 * p1 + f1 * p2,
            f3 * p1 * p1 * p1 + 3.0 * f2 * p1 * p2 + f1 * p3,
        ])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = rhs.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = rhs.0;
        let h0 = f0 / g0;
        let h1 = (f1 - h0 * g1) / g0;
        let h2 = (f2 - 2.0 * h1 * g1 - h0 * g2) / g0;
        let h3 = (f3 - 3.0 * h2 * g1 - 3.0 * h1 * g2 - h0 * g3) / g0;
        Jet([h0, h1, h2, h3])
    }
}

/// Position and first three derivatives of a curve in `R^D` at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet<const D: usize>(pub [SVector<f64, D>; 4]);

impl<const D: usize> CurveJet<D> {
    pub fn from_components(components: [Jet; D]) -> Self {
        let mut out = [SVector::<f64, D>::zeros(); 4];
        for (k, jet) in components.iter().enumerate() {
            for (order, v) in out.iter_mut().enumerate() {
                v[k] = jet.0[order];
            }
        }
        CurveJet(out)
    }

    pub fn component(&self, k: usize) -> Jet {
        Jet([self.0[0][k], self.0[1][k], self.0[2][k], self.0[3][k]])
    }

    pub fn components(&self) -> [Jet; D] {
        std::array::from_fn(|k| self.component(k))
    }

    pub fn point(&self) -> SVector<f64, D> {
        self.0[0]
    }

    pub fn deriv(&self, order: usize) -> SVector<f64, D> {
        self.0[order]
    }

    pub fn speed(&self) -> f64 {
        self.0[1].norm()
    }

    /// Jet of `t -> <self(t), other(t)>`.
    pub fn dot(&self, other: &CurveJet<D>) -> Jet {
        (0..D).fold(Jet::default(), |acc, k| acc + self.component(k) * other.component(k))
    }

    /// Jet of `t -> <h, self(t)>` for a fixed vector `h`.
    pub fn dot_fixed(&self, h: &SVector<f64, D>) -> Jet {
        Jet([
            h.dot(&self.0[0]),
            h.dot(&self.0[1]),
            h.dot(&self.0[2]),
            h.dot(&self.0[3]),
        ])
    }

    /// Jet of `t -> g(t) self(t)`.
    pub fn scale_by(&self, g: Jet) -> CurveJet<D> {
        CurveJet::from_components(self.components().map(|c| c * g))
    }

    pub fn compose(&self, phi: Jet) -> CurveJet<D> {
        CurveJet::from_components(self.components().map(|c| c.compose(phi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Jet, b: [f64; 4], tol: f64) {
        for (k, (x, y)) in a.0.iter().zip(b).enumerate() {
            assert!((x - y).abs() < tol, "order {k}: {x} vs {y}");
        }
    }

    #[test]
    fn product_quotient_sqrt() {
        let t = 0.7;
        let x = Jet::variable(t);
        // t^3
        close(x * x * x, [t * t * t, 3.0 * t * t, 6.0 * t, 6.0], 1e-14);
        // 1/t
        close(
            x.recip(),
            [1.0 / t, -1.0 / t.powi(2), 2.0 / t.powi(3), -6.0 / t.powi(4)],
            1e-12,
        );
        // sqrt(t)
        let s = t.sqrt();
        close(x.sqrt(), [s, 0.5 / s, -0.25 / (t * s), 0.375 / (t * t * s)], 1e-12);
    }

    #[test]
    fn trig_chain_rule() {
        let t = 0.3;
        let a = Jet::affine(t, 2.0, 0.1);
        let arg = 2.0 * t + 0.1;
        close(
            a.sin(),
            [arg.sin(), 2.0 * arg.cos(), -4.0 * arg.sin(), -8.0 * arg.cos()],
            1e-13,
        );
        close(
            a.cos(),
            [arg.cos(), -2.0 * arg.sin(), -4.0 * arg.cos(), 8.0 * arg.sin()],
            1e-13,
        );
        // sin(t^2)
        let x = Jet::variable(t);
        let u = t * t;
        close(
            (x * x).sin(),
            [
                u.sin(),
                2.0 * t * u.cos(),
                2.0 * u.cos() - 4.0 * u * u.sin(),
                -12.0 * t * u.sin() - 8.0 * t * u * u.cos(),
            ],
            1e-13,
        );
    }

    #[test]
    fn composition_matches_direct_evaluation() {
        let u = 0.4;
        let phi = Jet::variable(u) * Jet::variable(u) + Jet::variable(u);
        let direct = phi.sin();
        let composed = Jet::variable(phi.value()).sin().compose(phi);
        close(composed, direct.0, 1e-13);
    }
}
